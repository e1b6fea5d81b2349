#include "pathgauge/plaquette.hpp"

#include <algorithm>

namespace pathgauge {

namespace {

double dist(const Mat& x, const Mat& y) { return norm(Mat(x - y)); }

std::optional<Mat> twist_product(const std::optional<Mat>& z1, const std::optional<Mat>& z2) {
  if (!z1) return z2;
  if (!z2) return z1;
  return Mat(*z1 * *z2);
}

void require_match(const Mat& x, const Mat& y, const char* what) {
  const double r = dist(x, y);
  if (!(r <= kTolCat))
    throw Error(ErrorCode::NotComposable, std::string(what) + " differ by " + std::to_string(r));
}

}  // namespace

Plaquette identity_v(const CrossedModule& cm, const Mat& a) {
  const Mat e = cm.G().identity();
  return {a, e, a, e, cm.H().identity(), std::nullopt};
}

Plaquette identity_h(const CrossedModule& cm, const Mat& a) {
  const Mat e = cm.G().identity();
  return {e, a, e, a, cm.H().identity(), std::nullopt};
}

Plaquette compose_v(const CrossedModule& cm, const Plaquette& lower, const Plaquette& upper) {
  require_match(lower.c, upper.a, "lower.c and upper.a");
  const Group G = cm.G();
  return {lower.a,
          upper.b * lower.b,
          upper.c,
          upper.d * lower.d,
          lower.h * cm.alpha(G.inverse(lower.d), upper.h),
          twist_product(lower.z, upper.z)};
}

Plaquette compose_h(const CrossedModule& cm, const Plaquette& left, const Plaquette& right) {
  require_match(left.b, right.d, "left.b and right.d");
  const Group G = cm.G();
  return {right.a * left.a,
          right.b,
          right.c * left.c,
          left.d,
          cm.alpha(G.inverse(left.a), right.h) * left.h,
          twist_product(left.z, right.z)};
}

Plaquette inverse_v(const CrossedModule& cm, const Plaquette& m) {
  const Group G = cm.G();
  std::optional<Mat> z;
  if (m.z) z = G.inverse(*m.z);
  return {m.c, G.inverse(m.b), m.a, G.inverse(m.d), cm.alpha(m.d, cm.H().inverse(m.h)), z};
}

Plaquette inverse_h(const CrossedModule& cm, const Plaquette& m) {
  const Group G = cm.G();
  std::optional<Mat> z;
  if (m.z) z = G.inverse(*m.z);
  return {G.inverse(m.a), m.d, G.inverse(m.c), m.b, cm.alpha(m.a, cm.H().inverse(m.h)), z};
}

Mat tau_boundary(const CrossedModule& cm, const Plaquette& m) {
  const Group G = cm.G();
  return G.inverse(m.a) * G.inverse(m.b) * m.c * m.d;
}

double quasi_flat_residual(const CrossedModule& cm, const Plaquette& m) {
  return dist(cm.tau(m.h), tau_boundary(cm, m) * m.twist(cm.G()));
}

bool is_quasi_flat(const CrossedModule& cm, const Plaquette& m, double tol) {
  return quasi_flat_residual(cm, m) < tol;
}

double tau_equivalence_residual(const CrossedModule& cm, const Plaquette& m1, const Plaquette& m2) {
  return std::max({dist(m1.a, m2.a), dist(m1.b, m2.b), dist(m1.c, m2.c), dist(m1.d, m2.d),
                   dist(cm.tau(m1.h), cm.tau(m2.h))});
}

bool tau_equivalent(const CrossedModule& cm, const Plaquette& m1, const Plaquette& m2, double tol) {
  return tau_equivalence_residual(cm, m1, m2) < tol;
}

double plaquette_distance(const Plaquette& m1, const Plaquette& m2) {
  double r = std::max({dist(m1.a, m2.a), dist(m1.b, m2.b), dist(m1.c, m2.c), dist(m1.d, m2.d), dist(m1.h, m2.h)});
  if (m1.z || m2.z) {
    const Mat e = Mat::Identity(m1.a.rows(), m1.a.cols());
    r = std::max(r, dist(m1.z.value_or(e), m2.z.value_or(e)));
  }
  return r;
}

double centrality_residual(const CrossedModule& cm, const Plaquette& m, int n_samples, std::uint64_t seed) {
  if (!m.z) return 0.0;
  Rng rng(seed);
  const Group G = cm.G();
  double r = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    const Mat g = random_element(G, rng, 1.5);
    r = std::max(r, norm(commutator(*m.z, g)));
  }
  return r;
}

namespace {

double edge_mismatch(const Plaquette& x, const Plaquette& y) {
  return std::max({dist(x.a, y.a), dist(x.b, y.b), dist(x.c, y.c), dist(x.d, y.d)});
}

}  // namespace

InterchangeReport interchange_check(const CrossedModule& cm, const Plaquette& m, const Plaquette& m1,
                                    const Plaquette& m2, const Plaquette& m3) {
  for (const Plaquette* p : {&m, &m1, &m2, &m3})
    if (!is_quasi_flat(cm, *p))
      throw Error(ErrorCode::NotQuasiFlat, "window plaquette residual " + std::to_string(quasi_flat_residual(cm, *p)));
  InterchangeReport r;
  r.upper_star = compose_v(cm, compose_h(cm, m, m1), compose_h(cm, m2, m3));
  r.lower_star = compose_h(cm, compose_v(cm, m, m2), compose_v(cm, m1, m3));
  r.boundary = edge_mismatch(r.upper_star, r.lower_star);
  r.tau = dist(cm.tau(r.upper_star.h), cm.tau(r.lower_star.h));
  r.h_difference = dist(r.upper_star.h, r.lower_star.h);
  return r;
}

double quasi_flat_closure_check(const CrossedModule& cm, const Plaquette& m1, const Plaquette& m2,
                                Direction direction) {
  const Plaquette composite = direction == Direction::Vertical ? compose_v(cm, m1, m2) : compose_h(cm, m1, m2);
  return quasi_flat_residual(cm, composite);
}

bool tau_is_onto(const CrossedModule& cm) {
  if (cm.tau_is_identity()) return true;
  Rng rng(0x7a11);
  const Mat g = random_element(cm.G(), rng, 1.0);
  try {
    return dist(cm.tau(cm.tau_section(g)), g) < kTolCat;
  } catch (const Error&) {
    return false;
  }
}

std::optional<Mat> sign_twist(const Group& G) {
  const Mat minus = -G.identity();
  if (G.group_residual(minus) > 1e-12) return std::nullopt;
  return minus;
}

namespace {

// Random element of ker tau: all of H when tau is trivial, a sign when -I lies in the kernel, else e.
Mat random_kernel_element(const CrossedModule& cm, Rng& rng) {
  const Group G = cm.G(), H = cm.H();
  const Mat h = random_element(H, rng, 1.5);
  if (dist(cm.tau(h), G.identity()) < kTolCat) return h;
  const Mat minus = -H.identity();
  if (H.group_residual(minus) < 1e-12 && dist(cm.tau(minus), G.identity()) < kTolCat &&
      std::uniform_int_distribution<int>(0, 1)(rng) == 1)
    return minus;
  return H.identity();
}

}  // namespace

Plaquette random_quasi_flat(const CrossedModule& cm, Rng& rng, const EdgeConstraints& edges,
                            const std::optional<Mat>& z, double scale) {
  const Group G = cm.G();
  auto pick = [&](const std::optional<Mat>& fixed) { return fixed ? *fixed : random_element(G, rng, scale); };
  Plaquette m;
  m.a = pick(edges.a);
  m.b = pick(edges.b);
  m.z = z;
  const Mat twist = m.twist(G);
  if (tau_is_onto(cm)) {
    m.c = pick(edges.c);
    m.d = pick(edges.d);
  } else if (!edges.d) {
    // tau(h) = a^-1 b^-1 c d z can only reach the image of tau; take tau(h) = e.
    m.c = pick(edges.c);
    m.d = G.inverse(m.c) * m.b * m.a * G.inverse(twist);
  } else if (!edges.c) {
    m.d = *edges.d;
    m.c = m.b * m.a * G.inverse(twist) * G.inverse(m.d);
  } else {
    throw Error(ErrorCode::NotQuasiFlat, "all four edges fixed and tau is not onto");
  }
  m.h = cm.tau_section(Mat(tau_boundary(cm, m) * twist)) * random_kernel_element(cm, rng);
  return m;
}

Plaquette random_plaquette(const CrossedModule& cm, Rng& rng, double scale) {
  const Group G = cm.G();
  return {random_element(G, rng, scale), random_element(G, rng, scale), random_element(G, rng, scale),
          random_element(G, rng, scale), random_element(cm.H(), rng, scale), std::nullopt};
}

Plaquette from_transport(const FieldSet& f, const SurfaceGrid& grid) {
  f.validate();
  const LiftedSurface lift = surface_lift(f.Abar, f.A, grid, f.cm->G().identity());
  const std::vector<Mat> right_edge = edge_transport(f.A, grid, grid.Nt);
  const std::vector<Mat> h0 = surface_holonomy(f, lift, biholonomy_right_edge(f.Abar, f.A, grid));
  return {lift.rows.front().frame.back(), right_edge.back(), lift.rows.back().frame.back(), lift.left_edge.back(),
          h0.back(), std::nullopt};
}

BridgeReport transport_bridge(const FieldSet& f, SurfaceMapPtr surface, int N) {
  int half = N / 2;
  if (half % 2 != 0) ++half;
  BridgeReport r;
  r.full = from_transport(f, make_surface_grid(surface, 2 * half, N));
  r.left = from_transport(f, make_surface_grid(restricted_t(surface, 0.0, 0.5), half, N));
  r.right = from_transport(f, make_surface_grid(restricted_t(surface, 0.5, 1.0), half, N));
  r.quasi_flat = quasi_flat_residual(*f.cm, r.full);
  r.pasting = tau_equivalence_residual(*f.cm, compose_h(*f.cm, r.left, r.right), r.full);
  return r;
}

nlohmann::json matrix_to_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

Mat matrix_from_json(const nlohmann::json& j) {
  const int n = static_cast<int>(j.size());
  if (n == 0 || n > 4) throw Error(ErrorCode::ConfigParse, "matrix must have 1 to 4 rows");
  const int cols = static_cast<int>(j.at(0).size());
  Mat m(n, cols);
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(j.at(r).size()) != cols) throw Error(ErrorCode::ConfigParse, "ragged matrix rows");
    for (int c = 0; c < cols; ++c) m(r, c) = cplx(j.at(r).at(c).at(0).get<double>(), j.at(r).at(c).at(1).get<double>());
  }
  return m;
}

nlohmann::json to_json(const Plaquette& m) {
  nlohmann::json j = {{"a", matrix_to_json(m.a)}, {"b", matrix_to_json(m.b)}, {"c", matrix_to_json(m.c)},
                      {"d", matrix_to_json(m.d)}, {"h", matrix_to_json(m.h)}};
  j["z"] = m.z ? matrix_to_json(*m.z) : nlohmann::json(nullptr);
  return j;
}

Plaquette plaquette_from_json(const nlohmann::json& j) {
  Plaquette m{matrix_from_json(j.at("a")), matrix_from_json(j.at("b")), matrix_from_json(j.at("c")),
              matrix_from_json(j.at("d")), matrix_from_json(j.at("h")), std::nullopt};
  if (j.contains("z") && !j.at("z").is_null()) m.z = matrix_from_json(j.at("z"));
  return m;
}

}  // namespace pathgauge
