#include "pathgauge/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "pathgauge/plaquette.hpp"
#include "pathgauge/quadrature.hpp"

namespace pathgauge {

namespace {

struct TaskInfo {
  const char* name;
  std::optional<double> tolerance;
  bool needs_path;     // path and variation
  bool needs_surface;
};

const std::vector<TaskInfo>& task_table() {
  static const std::vector<TaskInfo> table = {
      {"check-cm", 1e-9, false, false},
      {"transport-path", 1e-9, true, false},
      {"transport-surface", 1e-9, false, true},
      {"biholonomy", 1e-8, false, true},
      {"stokes", 1e-6, true, false},
      {"connection-axioms", 1e-10, true, false},
      {"omega-lift", 1e-8, true, false},
      {"tgb", 1e-5, false, true},
      {"ev1", 1e-5, false, true},
      {"reparam", 1e-5, false, true},
      {"plaquette-category", 1e-12, false, false},
      {"quasi-flat-closure", 1e-9, false, false},
      {"interchange", 1e-10, false, false},
      {"bridge-quasi-flat", 1e-5, false, true},
      {"bridge-pasting", 1e-4, false, true},
      {"abelian-holonomy", 1e-7, false, true},
      {"halfpath", std::nullopt, false, true},
  };
  return table;
}

const TaskInfo& task_info(const std::string& name) {
  for (const TaskInfo& t : task_table())
    if (name == t.name) return t;
  throw Error(ErrorCode::UnknownTask, "'" + name + "'");
}

// ---- YAML helpers -------------------------------------------------------

std::string where(const YAML::Node& node, const std::string& key) {
  const YAML::Mark m = node.Mark();
  if (m.line < 0) return "key '" + key + "'";
  return "line " + std::to_string(m.line + 1) + ", key '" + key + "'";
}

[[noreturn]] void parse_error(const YAML::Node& node, const std::string& key, const std::string& msg) {
  throw Error(ErrorCode::ConfigParse, where(node, key) + ": " + msg);
}

void check_keys(const YAML::Node& node, const std::string& section, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) parse_error(node, section, "expected a mapping");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      parse_error(kv.first, section + "." + key, "unknown key");
  }
}

template <class T>
T get(const YAML::Node& parent, const std::string& key, const T& fallback) {
  const YAML::Node n = parent[key];
  if (!n) return fallback;
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    parse_error(n, key, "wrong type");
  }
}

template <class T>
T require(const YAML::Node& parent, const std::string& key) {
  const YAML::Node n = parent[key];
  if (!n) parse_error(parent, key, "missing");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    parse_error(n, key, "wrong type");
  }
}

Vec2 get_vec2(const YAML::Node& parent, const std::string& key, const std::optional<Vec2>& fallback = std::nullopt) {
  const YAML::Node n = parent[key];
  if (!n) {
    if (fallback) return *fallback;
    parse_error(parent, key, "missing");
  }
  if (!n.IsSequence() || n.size() != 2) parse_error(n, key, "expected [x, y]");
  return Vec2(n[0].as<double>(), n[1].as<double>());
}

std::vector<Vec2> get_points(const YAML::Node& parent, const std::string& key) {
  const YAML::Node n = parent[key];
  if (!n || !n.IsSequence()) parse_error(parent, key, "expected a list of [x, y] points");
  std::vector<Vec2> out;
  for (const auto& p : n) {
    if (!p.IsSequence() || p.size() != 2) parse_error(p, key, "expected [x, y]");
    out.emplace_back(p[0].as<double>(), p[1].as<double>());
  }
  return out;
}

Mat get_algebra(const YAML::Node& parent, const std::string& key, const Group& G) {
  const auto coeffs = require<std::vector<double>>(parent, key);
  if (static_cast<int>(coeffs.size()) != G.algebra_dim())
    parse_error(parent[key], key,
                "expected " + std::to_string(G.algebra_dim()) + " algebra coefficients for " + G.name());
  return G.from_coeffs(coeffs);
}

std::string family_of(const YAML::Node& node, const std::string& key) {
  if (!node || !node.IsMap()) parse_error(node, key, "expected a mapping with 'family'");
  return require<std::string>(node, "family");
}

// ---- field families -----------------------------------------------------

ConnectionField parse_connection(const YAML::Node& node, const std::string& key, const Group& G,
                                 std::uint64_t default_seed, const ConnectionField* abar, std::string& family) {
  if (!node || node.IsNull()) {
    family = "zero";
    return ConnectionField::zero(G);
  }
  family = family_of(node, key);
  if (family == "zero") {
    check_keys(node, key, {"family"});
    return ConnectionField::zero(G);
  }
  if (family == "constant") {
    check_keys(node, key, {"family", "a1", "a2"});
    return ConnectionField::constant(G, get_algebra(node, "a1", G), get_algebra(node, "a2", G));
  }
  if (family == "landau") {
    check_keys(node, key, {"family", "b", "generator"});
    const int gen = get<int>(node, "generator", 0);
    if (gen < 0 || gen >= G.algebra_dim()) parse_error(node, key + ".generator", "basis index out of range");
    return ConnectionField::landau(G, require<double>(node, "b"), G.basis(gen));
  }
  if (family == "poly2") {
    check_keys(node, key, {"family", "scale", "seed"});
    return ConnectionField::random_poly2(G, get<double>(node, "scale", 0.5),
                                         get<std::uint64_t>(node, "seed", default_seed));
  }
  if (family == "same-as-abar" && abar) {
    check_keys(node, key, {"family"});
    return *abar;
  }
  throw Error(ErrorCode::UnknownFamily, where(node, key) + ": connection family '" + family + "'");
}

TwoFormField parse_two_form(const YAML::Node& node, const Group& H, const CrossedModule& cm,
                            const ConnectionField& abar, std::uint64_t default_seed, std::string& family) {
  const std::string key = "fields.B";
  if (!node || node.IsNull()) {
    family = "zero";
    return TwoFormField::zero(H);
  }
  family = family_of(node, key);
  if (family == "zero") {
    check_keys(node, key, {"family"});
    return TwoFormField::zero(H);
  }
  if (family == "constant") {
    check_keys(node, key, {"family", "value"});
    return TwoFormField::constant(H, get_algebra(node, "value", H));
  }
  if (family == "poly2") {
    check_keys(node, key, {"family", "scale", "seed"});
    Rng rng(get<std::uint64_t>(node, "seed", default_seed));
    const double scale = get<double>(node, "scale", 0.5);
    std::array<Mat, kMonomials> coeffs;
    for (Mat& c : coeffs) c = random_algebra(H, rng, scale);
    return TwoFormField::poly2(H, coeffs);
  }
  if (family == "flatting") {
    check_keys(node, key, {"family", "plus"});
    TwoFormField B;
    try {
      B = make_flatting_B(abar, cm);
    } catch (const Error& e) {
      parse_error(node, key, e.what());
    }
    if (node["plus"]) B = B + TwoFormField::constant(H, get_algebra(node, "plus", H));
    return B;
  }
  throw Error(ErrorCode::UnknownFamily, where(node, key) + ": two-form family '" + family + "'");
}

// ---- geometry families --------------------------------------------------

PathMapPtr parse_path(const YAML::Node& node) {
  const std::string key = "geometry.path";
  const std::string family = family_of(node, key);
  if (family == "segment") {
    check_keys(node, key, {"family", "from", "to"});
    return make_segment(get_vec2(node, "from"), get_vec2(node, "to"));
  }
  if (family == "arc") {
    check_keys(node, key, {"family", "center", "radius", "theta0", "theta1"});
    return make_arc(get_vec2(node, "center", Vec2::Zero()), get<double>(node, "radius", 1.0),
                    require<double>(node, "theta0"), require<double>(node, "theta1"));
  }
  if (family == "cubic") {
    check_keys(node, key, {"family", "points"});
    const std::vector<Vec2> p = get_points(node, "points");
    if (p.size() != 4) parse_error(node, key + ".points", "a cubic needs 4 control points");
    return make_cubic(p[0], p[1], p[2], p[3]);
  }
  if (family == "points") {
    check_keys(node, key, {"family", "x", "t"});
    const std::vector<Vec2> x = get_points(node, "x");
    std::vector<double> t;
    if (node["t"]) {
      t = require<std::vector<double>>(node, "t");
    } else {
      for (std::size_t k = 0; k < x.size(); ++k) t.push_back(static_cast<double>(k) / (x.size() - 1));
    }
    if (t.size() != x.size()) parse_error(node, key + ".t", "t and x differ in length");
    try {
      return make_point_path(t, x);
    } catch (const std::exception& e) {
      parse_error(node, key, e.what());
    }
  }
  throw Error(ErrorCode::UnknownFamily, where(node, key) + ": path family '" + family + "'");
}

TangentMap parse_variation(const YAML::Node& node) {
  const std::string key = "geometry.variation";
  const std::string family = family_of(node, key);
  if (family == "constant") {
    check_keys(node, key, {"family", "v"});
    return constant_tangent(get_vec2(node, "v"));
  }
  if (family == "linear") {
    check_keys(node, key, {"family", "from", "to"});
    return linear_tangent(get_vec2(node, "from"), get_vec2(node, "to"));
  }
  if (family == "bump") {
    check_keys(node, key, {"family", "dir"});
    return bump_tangent(get_vec2(node, "dir"));
  }
  throw Error(ErrorCode::UnknownFamily, where(node, key) + ": variation family '" + family + "'");
}

SurfaceMapPtr parse_surface(const YAML::Node& node, const PathMapPtr& path, std::string& family) {
  const std::string key = "geometry.surface";
  family = family_of(node, key);
  if (family == "identity-square") {
    check_keys(node, key, {"family", "scale", "origin"});
    return make_identity_square(get<double>(node, "scale", 1.0), get_vec2(node, "origin", Vec2::Zero()));
  }
  if (family == "warp") {
    check_keys(node, key, {"family", "amplitude"});
    return make_warp(get<double>(node, "amplitude", 0.2));
  }
  if (family == "constant-path") {
    check_keys(node, key, {"family"});
    if (!path) parse_error(node, key, "constant-path needs geometry.path");
    return make_constant_surface(path);
  }
  if (family == "points") {
    check_keys(node, key, {"family", "Nt", "Ns", "points"});
    const int Nt = require<int>(node, "Nt"), Ns = require<int>(node, "Ns");
    std::vector<Vec2> pts = get_points(node, "points");
    if (Nt < 3 || Ns < 3 || static_cast<int>(pts.size()) != (Nt + 1) * (Ns + 1))
      parse_error(node, key + ".points", "needs (Nt+1)(Ns+1) points with Nt, Ns >= 3");
    return make_point_surface(Nt, Ns, std::move(pts));
  }
  throw Error(ErrorCode::UnknownFamily, where(node, key) + ": surface family '" + family + "'");
}

void check_grid_size(const YAML::Node& node, const std::string& key, int N) {
  if (N < 10 || N % 2 != 0) parse_error(node, key, "grid sizes must be even and at least 10, got " + std::to_string(N));
}

// ---- task bodies --------------------------------------------------------

using json = nlohmann::ordered_json;

struct Outcome {
  double residual = 0.0;
  json details = json::object();
};

double max_group_residual(const Group& G, const std::vector<Mat>& frames) {
  double r = 0.0;
  for (const Mat& m : frames) r = std::max(r, G.group_residual(m));
  return r;
}

json matrix(const Mat& m) { return json::parse(matrix_to_json(m).dump()); }

Outcome task_check_cm(const Scenario& sc) {
  const CrossedModuleReport r = crossed_module_check(*sc.fields.cm, sc.numerics.samples, sc.seed);
  return {std::max(r.equivariance, r.peiffer), {{"equivariance", r.equivariance}, {"peiffer", r.peiffer},
                                                {"samples", r.samples}}};
}

Outcome task_transport_path(const Scenario& sc, int N) {
  const Group G = sc.fields.cm->G();
  const SampledPath gamma = sample_path(*sc.path, N);
  const LiftedPath lift = path_holonomy(sc.fields.Abar, gamma);
  const Mat back = transport(sc.fields.Abar, sample_path(*reversed(sc.path), N));
  const double group = max_group_residual(G, lift.frame);
  const double reversal = norm(Mat(back * lift.frame.back() - G.identity()));
  return {std::max(group, reversal),
          {{"group_residual", group}, {"reversal_residual", reversal}, {"holonomy", matrix(lift.frame.back())}}};
}

Outcome task_transport_surface(const Scenario& sc, int Nt, int Ns) {
  const Group G = sc.fields.cm->G();
  const SurfaceGrid grid = make_surface_grid(sc.surface, Nt, Ns);
  const LiftedSurface lift = surface_lift(sc.fields.Abar, sc.fields.A, grid, G.identity());
  double group = max_group_residual(G, lift.left_edge);
  for (const LiftedPath& row : lift.rows) group = std::max(group, max_group_residual(G, row.frame));
  const std::vector<Mat> c = omega_transport_local(sc.fields, lift);
  const std::vector<Mat> h0 = surface_holonomy(sc.fields, lift, biholonomy_right_edge(sc.fields.Abar, sc.fields.A, grid));
  group = std::max({group, max_group_residual(G, c), max_group_residual(sc.fields.cm->H(), h0)});
  return {group, {{"c_final", matrix(c.back())}, {"h0_final", matrix(h0.back())}}};
}

Outcome task_biholonomy(const Scenario& sc, int Nt, int Ns) {
  const SurfaceGrid grid = make_surface_grid(sc.surface, Nt, Ns);
  const LiftedSurface lift = surface_lift(sc.fields.Abar, sc.fields.A, grid, sc.fields.cm->G().identity());
  const std::vector<Mat> closed = biholonomy_closed_form(lift, edge_transport(sc.fields.A, grid, Nt));
  const std::vector<Mat> loop = biholonomy_right_edge(sc.fields.Abar, sc.fields.A, grid);
  double r = 0.0;
  for (std::size_t j = 0; j < loop.size(); ++j) r = std::max(r, norm(Mat(loop[j] - closed[j])));
  return {r, {{"g_final", matrix(loop.back())}}};
}

struct PathSetup {
  LiftedPath lift;
  TangentField v;
};

PathSetup path_setup(const Scenario& sc, int N) {
  const SampledPath gamma = sample_path(*sc.path, N);
  return {path_holonomy(sc.fields.Abar, gamma), sample_tangent(sc.variation, N)};
}

Outcome task_stokes(const Scenario& sc, int N) {
  const PathSetup p = path_setup(sc, N);
  const Mat w0 = sc.fields.Abar.along(p.lift.base.x[0], p.v.v[0]);
  const LiftedTangentField field = lift_tangent_field(sc.fields.Abar, p.lift, p.v, w0);
  const double tangency = tangency_residual(sc.fields.Abar, p.lift, field);
  return {stokes_residual_max(sc.fields.Abar, p.lift, field), {{"tangency_fd", tangency}}};
}

Outcome task_connection_axioms(const Scenario& sc, int N) {
  const PathSetup p = path_setup(sc, N);
  const ConnectionAxiomReport r = connection_axioms_check(sc.fields, p.lift, p.v, 20, sc.seed);
  return {std::max(r.vertical, r.equivariance), {{"vertical", r.vertical}, {"equivariance", r.equivariance}}};
}

Outcome task_omega_lift(const Scenario& sc, int N) {
  const PathSetup p = path_setup(sc, N);
  const LiftedTangentField field = omega_horizontal_lift(sc.fields, p.lift, p.v);
  const OmegaLiftReport r = omega_lift_check(sc.fields, p.lift, field);
  return {std::max(r.omega, r.cross_form),
          {{"omega", r.omega}, {"cross_form", r.cross_form}, {"tangency_fd", r.tangency}}};
}

Outcome task_tgb(const Scenario& sc, int Nt, int Ns) {
  const TgbReport r = verify_tgb(sc.fields, make_surface_grid(sc.surface, Nt, Ns));
  return {r.residual, {{"c_final", matrix(r.c.back())}, {"h0_final", matrix(r.h0.back())}}};
}

Outcome task_ev1(const Scenario& sc, int Nt, int Ns) {
  return {ev1_transport_check(sc.fields, make_surface_grid(sc.surface, Nt, Ns)), json::object()};
}

Outcome task_reparam(const Scenario& sc, int Nt, int Ns) {
  ReparamOptions opt;
  opt.enforce_condition = sc.reparam->enforce_condition;
  const ReparamReport r = verify_reparam(sc.fields, make_surface_grid(sc.surface, Nt, Ns), sc.reparam->phi, opt);
  return {r.residual,
          {{"frame_residual", r.frame_residual},
           {"point_residual", r.point_residual},
           {"fake_curvature", r.fake_curvature},
           {"mode", sc.reparam->phi.mode == Reparametrization::Mode::I ? "i" : "ii"},
           {"enforce_condition", sc.reparam->enforce_condition}}};
}

Plaquette random_with_edges(const CrossedModule& cm, Rng& rng, std::optional<Mat> a, std::optional<Mat> d) {
  Plaquette m = random_plaquette(cm, rng);
  if (a) m.a = *a;
  if (d) m.d = *d;
  return m;
}

Outcome task_plaquette_category(const Scenario& sc) {
  const CrossedModule& cm = *sc.fields.cm;
  Rng rng(sc.seed);
  double assoc = 0.0, ident = 0.0, inv = 0.0;
  for (int k = 0; k < sc.numerics.samples; ++k) {
    // Vert: upper.a = lower.c.
    const Plaquette v1 = random_plaquette(cm, rng);
    const Plaquette v2 = random_with_edges(cm, rng, v1.c, std::nullopt);
    const Plaquette v3 = random_with_edges(cm, rng, v2.c, std::nullopt);
    assoc = std::max(assoc, plaquette_distance(compose_v(cm, compose_v(cm, v1, v2), v3),
                                               compose_v(cm, v1, compose_v(cm, v2, v3))));
    ident = std::max({ident, plaquette_distance(compose_v(cm, v1, identity_v(cm, v1.c)), v1),
                      plaquette_distance(compose_v(cm, identity_v(cm, v1.a), v1), v1)});
    inv = std::max({inv, plaquette_distance(compose_v(cm, v1, inverse_v(cm, v1)), identity_v(cm, v1.a)),
                    plaquette_distance(compose_v(cm, inverse_v(cm, v1), v1), identity_v(cm, v1.c))});
    // Horz: right.d = left.b.
    const Plaquette h1 = random_plaquette(cm, rng);
    const Plaquette h2 = random_with_edges(cm, rng, std::nullopt, h1.b);
    const Plaquette h3 = random_with_edges(cm, rng, std::nullopt, h2.b);
    assoc = std::max(assoc, plaquette_distance(compose_h(cm, compose_h(cm, h1, h2), h3),
                                               compose_h(cm, h1, compose_h(cm, h2, h3))));
    ident = std::max({ident, plaquette_distance(compose_h(cm, h1, identity_h(cm, h1.b)), h1),
                      plaquette_distance(compose_h(cm, identity_h(cm, h1.d), h1), h1)});
    inv = std::max({inv, plaquette_distance(compose_h(cm, h1, inverse_h(cm, h1)), identity_h(cm, h1.d)),
                    plaquette_distance(compose_h(cm, inverse_h(cm, h1), h1), identity_h(cm, h1.b))});
  }
  return {std::max({assoc, ident, inv}),
          {{"associativity", assoc}, {"identity", ident}, {"inverse", inv}, {"samples", sc.numerics.samples}}};
}

Outcome task_quasi_flat_closure(const Scenario& sc) {
  const CrossedModule& cm = *sc.fields.cm;
  Rng rng(sc.seed);
  std::vector<std::optional<Mat>> twists{std::nullopt};
  if (auto z = sign_twist(cm.G())) twists.push_back(z);
  double vertical = 0.0, horizontal = 0.0;
  for (const auto& z : twists)
    for (int k = 0; k < sc.numerics.samples; ++k) {
      const Plaquette lower = random_quasi_flat(cm, rng, {}, z);
      const Plaquette upper = random_quasi_flat(cm, rng, {.a = lower.c}, z);
      vertical = std::max(vertical, quasi_flat_closure_check(cm, lower, upper, Direction::Vertical));
      const Plaquette left = random_quasi_flat(cm, rng, {}, z);
      const Plaquette right = random_quasi_flat(cm, rng, {.d = left.b}, z);
      horizontal = std::max(horizontal, quasi_flat_closure_check(cm, left, right, Direction::Horizontal));
    }
  return {std::max(vertical, horizontal),
          {{"vertical", vertical}, {"horizontal", horizontal}, {"twisted", twists.size() > 1},
           {"samples", sc.numerics.samples}}};
}

Outcome task_interchange(const Scenario& sc) {
  const CrossedModule& cm = *sc.fields.cm;
  Rng rng(sc.seed);
  double boundary = 0.0, tau = 0.0, h_diff = 0.0;
  for (int k = 0; k < sc.numerics.samples; ++k) {
    const Plaquette m = random_quasi_flat(cm, rng);
    const Plaquette m1 = random_quasi_flat(cm, rng, {.d = m.b});
    const Plaquette m2 = random_quasi_flat(cm, rng, {.a = m.c});
    const Plaquette m3 = random_quasi_flat(cm, rng, {.a = m1.c, .d = m2.b});
    const InterchangeReport r = interchange_check(cm, m, m1, m2, m3);
    boundary = std::max(boundary, r.boundary);
    tau = std::max(tau, r.tau);
    h_diff = std::max(h_diff, r.h_difference);
  }
  return {std::max(boundary, tau),
          {{"boundary", boundary}, {"tau", tau}, {"h_difference", h_diff}, {"samples", sc.numerics.samples}}};
}

Outcome task_bridge(const Scenario& sc, int Nt, bool pasting) {
  const BridgeReport r = transport_bridge(sc.fields, sc.surface, Nt);
  json details = {{"quasi_flat", r.quasi_flat}, {"pasting", r.pasting}, {"plaquette", to_json(r.full)}};
  return {pasting ? r.pasting : r.quasi_flat, json::parse(details.dump())};
}

Outcome task_abelian_holonomy(const Scenario& sc, int Nt, int Ns) {
  const Group H = sc.fields.cm->H();
  const SurfaceGrid grid = make_surface_grid(sc.surface, Nt, Ns);
  const std::vector<Mat> h0 = surface_holonomy(sc.fields, grid);
  std::vector<Mat> rows(Ns + 1);
  for (int j = 0; j <= Ns; ++j) {
    std::vector<Mat> f(Nt + 1);
    for (int i = 0; i <= Nt; ++i) {
      const int n = grid.index(i, j);
      f[i] = wedge(grid.dt[n], grid.ds[n]) * sc.fields.B(grid.points[n]);
    }
    rows[j] = simpson(f, 1.0 / Nt);
  }
  const Mat expected = H.exp(Mat(-simpson(rows, 1.0 / Ns)));
  const double r = norm(Mat(h0.back() - expected)) / norm(expected);
  return {r, {{"h0_final", matrix(h0.back())}, {"closed_form", matrix(expected)}}};
}

Outcome task_halfpath(const Scenario& sc, int Nt, int Ns) {
  const HalfPathReport r = halfpath_demo(sc.fields, make_surface_grid(sc.surface, Nt, Ns));
  return {r.difference, {{"note", "left half transported on its own vs the full transport at s = 1"}}};
}

Outcome dispatch(const Scenario& sc, const std::string& task, int Nt, int Ns) {
  if (task == "check-cm") return task_check_cm(sc);
  if (task == "transport-path") return task_transport_path(sc, Nt);
  if (task == "transport-surface") return task_transport_surface(sc, Nt, Ns);
  if (task == "biholonomy") return task_biholonomy(sc, Nt, Ns);
  if (task == "stokes") return task_stokes(sc, Nt);
  if (task == "connection-axioms") return task_connection_axioms(sc, Nt);
  if (task == "omega-lift") return task_omega_lift(sc, Nt);
  if (task == "tgb") return task_tgb(sc, Nt, Ns);
  if (task == "ev1") return task_ev1(sc, Nt, Ns);
  if (task == "reparam") return task_reparam(sc, Nt, Ns);
  if (task == "plaquette-category") return task_plaquette_category(sc);
  if (task == "quasi-flat-closure") return task_quasi_flat_closure(sc);
  if (task == "interchange") return task_interchange(sc);
  if (task == "bridge-quasi-flat") return task_bridge(sc, Nt, false);
  if (task == "bridge-pasting") return task_bridge(sc, Nt, true);
  if (task == "abelian-holonomy") return task_abelian_holonomy(sc, Nt, Ns);
  if (task == "halfpath") return task_halfpath(sc, Nt, Ns);
  throw Error(ErrorCode::UnknownTask, "'" + task + "'");
}

}  // namespace

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const TaskInfo& t : task_table()) out.emplace_back(t.name);
    return out;
  }();
  return names;
}

std::optional<double> default_tolerance(const std::string& task) { return task_info(task).tolerance; }

double Scenario::tolerance(const std::string& task) const {
  if (auto it = numerics.tolerances.find(task); it != numerics.tolerances.end()) return it->second;
  return task_info(task).tolerance.value_or(std::numeric_limits<double>::infinity());
}

Scenario parse_scenario(const std::string& text, std::optional<std::uint64_t> seed_override) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorCode::ConfigParse, "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw Error(ErrorCode::ConfigParse, "scenario must be a mapping");
  check_keys(root, "scenario",
             {"name", "crossed_module", "seed", "fields", "geometry", "reparametrization", "numerics", "tasks"});

  Scenario sc;
  sc.name = require<std::string>(root, "name");
  sc.seed = seed_override.value_or(get<std::uint64_t>(root, "seed", 1));
  sc.module_name = require<std::string>(root, "crossed_module");
  const CrossedModulePtr cm = make_crossed_module(sc.module_name);
  const Group G = cm->G(), H = cm->H();

  const YAML::Node fields = root["fields"];
  if (fields) check_keys(fields, "fields", {"Abar", "A", "B"});
  const YAML::Node empty;
  const ConnectionField abar =
      parse_connection(fields ? fields["Abar"] : empty, "fields.Abar", G, sc.seed + 1, nullptr, sc.abar_family);
  const ConnectionField a =
      parse_connection(fields ? fields["A"] : empty, "fields.A", G, sc.seed + 2, &abar, sc.a_family);
  const TwoFormField b = parse_two_form(fields ? fields["B"] : empty, H, *cm, abar, sc.seed + 3, sc.b_family);
  sc.fields = FieldSet{cm, abar, a, b};
  sc.fields.validate();

  if (const YAML::Node geo = root["geometry"]) {
    check_keys(geo, "geometry", {"path", "variation", "surface"});
    if (geo["path"]) sc.path = parse_path(geo["path"]);
    if (geo["variation"]) sc.variation = parse_variation(geo["variation"]);
    if (geo["surface"]) sc.surface = parse_surface(geo["surface"], sc.path, sc.surface_family);
  }

  if (const YAML::Node rep = root["reparametrization"]) {
    check_keys(rep, "reparametrization", {"a", "b", "mode", "enforce_condition"});
    ReparamSpec spec;
    spec.phi.a = get<double>(rep, "a", 0.0);
    spec.phi.b = get<double>(rep, "b", 0.0);
    const std::string mode = get<std::string>(rep, "mode", "i");
    if (mode == "i") spec.phi.mode = Reparametrization::Mode::I;
    else if (mode == "ii") spec.phi.mode = Reparametrization::Mode::II;
    else parse_error(rep["mode"], "reparametrization.mode", "expected 'i' or 'ii'");
    spec.enforce_condition = get<bool>(rep, "enforce_condition", true);
    try {
      spec.phi.validate(64);
    } catch (const Error& e) {
      parse_error(rep, "reparametrization", e.what());
    }
    sc.reparam = spec;
  }

  if (const YAML::Node num = root["numerics"]) {
    check_keys(num, "numerics", {"N_t", "N_s", "N_list", "samples", "tolerances"});
    sc.numerics.Nt = get<int>(num, "N_t", 200);
    sc.numerics.Ns = get<int>(num, "N_s", 200);
    check_grid_size(num, "numerics.N_t", sc.numerics.Nt);
    check_grid_size(num, "numerics.N_s", sc.numerics.Ns);
    sc.numerics.N_list = get<std::vector<int>>(num, "N_list", sc.numerics.N_list);
    for (int N : sc.numerics.N_list) check_grid_size(num, "numerics.N_list", N);
    if (!std::is_sorted(sc.numerics.N_list.begin(), sc.numerics.N_list.end()))
      parse_error(num, "numerics.N_list", "must be increasing");
    sc.numerics.samples = get<int>(num, "samples", 1000);
    if (sc.numerics.samples < 1) parse_error(num, "numerics.samples", "must be positive");
    if (const YAML::Node tol = num["tolerances"]) {
      if (!tol.IsMap()) parse_error(tol, "numerics.tolerances", "expected a mapping");
      for (const auto& kv : tol) {
        const std::string task = kv.first.as<std::string>();
        task_info(task);
        const double value = kv.second.as<double>();
        if (!(value > 0.0)) parse_error(kv.second, "numerics.tolerances." + task, "must be positive");
        sc.numerics.tolerances[task] = value;
      }
    }
  }

  if (const YAML::Node tasks = root["tasks"]) {
    if (!tasks.IsSequence()) parse_error(tasks, "tasks", "expected a list");
    for (const auto& t : tasks) sc.tasks.push_back(t.as<std::string>());
  }
  validate_tasks(sc, sc.tasks);
  return sc;
}

Scenario load_scenario(const std::string& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigParse, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), seed_override);
}

void validate_tasks(const Scenario& sc, const std::vector<std::string>& tasks) {
  std::set<std::string> seen;
  for (const std::string& name : tasks) {
    const TaskInfo& t = task_info(name);
    if (!seen.insert(name).second) throw Error(ErrorCode::ConfigParse, "task '" + name + "' listed twice");
    if (t.needs_path && (!sc.path || !sc.variation))
      throw Error(ErrorCode::ConfigParse, "task '" + name + "' needs geometry.path and geometry.variation");
    if (t.needs_surface && !sc.surface)
      throw Error(ErrorCode::ConfigParse, "task '" + name + "' needs geometry.surface");
    if (name == "reparam" && !sc.reparam)
      throw Error(ErrorCode::ConfigParse, "task 'reparam' needs a reparametrization section");
    if (name == "interchange" && !tau_is_onto(*sc.fields.cm))
      throw Error(ErrorCode::ConfigParse, "task 'interchange' needs a crossed module with tau onto G");
    if (name == "abelian-holonomy" && (!sc.fields.cm->H().is_abelian() || sc.b_family != "constant"))
      throw Error(ErrorCode::ConfigParse, "task 'abelian-holonomy' needs abelian H and a constant B");
  }
}

TaskResult run_task(const Scenario& sc, const std::string& task, int Nt, int Ns) {
  TaskResult r;
  r.task = task;
  r.tolerance = task_info(task).tolerance;
  if (r.tolerance) r.tolerance = sc.tolerance(task);
  const auto start = std::chrono::steady_clock::now();
  try {
    Outcome out = dispatch(sc, task, Nt, Ns);
    r.residual = out.residual;
    r.details = std::move(out.details);
    r.pass = !r.tolerance || r.residual < *r.tolerance;
  } catch (const Error& e) {
    // A task that cannot run reports the largest finite residual so that pass <=> residual < tolerance holds.
    r.residual = std::numeric_limits<double>::max();
    r.details = {{"error", e.what()}};
    r.pass = false;
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!std::isfinite(r.residual)) {
    r.details["non_finite_residual"] = true;
    r.residual = std::numeric_limits<double>::max();
    r.pass = false;
  }
  return r;
}

Report run_scenario(const Scenario& sc, const std::optional<std::vector<std::string>>& tasks) {
  const std::vector<std::string>& list = tasks ? *tasks : sc.tasks;
  validate_tasks(sc, list);
  Report report;
  report.scenario = sc.name;
  for (const std::string& t : list) report.tasks.push_back(run_task(sc, t, sc.numerics.Nt, sc.numerics.Ns));
  return report;
}

Report run_scenario(const std::string& config_text) { return run_scenario(parse_scenario(config_text)); }

std::vector<ConvergenceRow> run_convergence(const Scenario& sc, const std::vector<int>& N_list,
                                            const std::optional<std::vector<std::string>>& tasks) {
  const std::vector<std::string>& list = tasks ? *tasks : sc.tasks;
  validate_tasks(sc, list);
  if (N_list.empty()) throw Error(ErrorCode::ConfigParse, "empty N list");
  for (std::size_t k = 0; k < N_list.size(); ++k)
    if (N_list[k] < 10 || N_list[k] % 2 != 0 || (k > 0 && N_list[k] <= N_list[k - 1]))
      throw Error(ErrorCode::ConfigParse, "N list must be even, at least 10 and increasing");
  std::vector<ConvergenceRow> rows;
  for (const std::string& t : list) {
    std::vector<double> residuals;
    for (int N : N_list) residuals.push_back(run_task(sc, t, N, N).residual);
    const std::optional<double> slope = loglog_slope(N_list, residuals);
    for (std::size_t k = 0; k < N_list.size(); ++k) rows.push_back({N_list[k], t, residuals[k], slope});
  }
  return rows;
}

}  // namespace pathgauge
