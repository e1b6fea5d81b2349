#include "pathgauge/pathspace.hpp"

#include <algorithm>

#include "pathgauge/quadrature.hpp"

namespace pathgauge {

void FieldSet::validate() const {
  if (!cm) throw Error(ErrorCode::TagMismatch, "field set without crossed module");
  const Group G = cm->G(), H = cm->H();
  if (Abar.group() != G) throw Error(ErrorCode::TagMismatch, "Abar lives in " + Abar.group().name() + ", G is " + G.name());
  if (A.group() != G) throw Error(ErrorCode::TagMismatch, "A lives in " + A.group().name() + ", G is " + G.name());
  if (B.group() != H) throw Error(ErrorCode::TagMismatch, "B lives in " + B.group().name() + ", H is " + H.name());
}

LiftedPath horizontal_lift_path(const ConnectionField& Abar, const SampledPath& gamma, const Mat& seed) {
  const Group& G = Abar.group();
  const int N = gamma.N();
  const double h = gamma.step();
  LiftedPath lift{G, gamma, std::vector<Mat>(N + 1), std::vector<Mat>(N)};
  lift.frame[0] = seed;
  for (int k = 0; k < N; ++k) {
    const Mat xi = Abar.along(gamma.x_mid[k], gamma.dx_mid[k]);
    lift.frame_mid[k] = G.exp(Mat(-0.5 * h * xi)) * lift.frame[k];
    lift.frame[k + 1] = G.exp(Mat(-h * xi)) * lift.frame[k];
  }
  return lift;
}

LiftedPath path_holonomy(const ConnectionField& Abar, const SampledPath& gamma) {
  return horizontal_lift_path(Abar, gamma, Abar.group().identity());
}

Mat transport(const ConnectionField& A, const SampledPath& gamma) {
  const Group& G = A.group();
  const double h = gamma.step();
  Mat g = G.identity();
  for (int k = 0; k < gamma.N(); ++k) g = G.exp(Mat(-h * A.along(gamma.x_mid[k], gamma.dx_mid[k]))) * g;
  return g;
}

LiftedPath right_translate(const LiftedPath& lift, const Mat& g) {
  LiftedPath out = lift;
  for (Mat& m : out.frame) m = m * g;
  for (Mat& m : out.frame_mid) m = m * g;
  return out;
}

LiftedTangentField right_translate(const LiftedTangentField& field, const Group& G, const Mat& g) {
  LiftedTangentField out = field;
  const Mat gi = G.inverse(g);
  for (Mat& w : out.w) w = ad(gi, g, w);
  return out;
}

namespace {

void require_match(const SampledPath& p, const TangentField& v) {
  if (static_cast<int>(v.v.size()) != p.N() + 1 || static_cast<int>(v.v_mid.size()) != p.N())
    throw Error(ErrorCode::GridMismatch, "tangent field has " + std::to_string(v.v.size()) + " nodes, path has " +
                                             std::to_string(p.N() + 1));
}

void require_match(const LiftedPath& l, const LiftedTangentField& f) {
  require_match(l.base, f.v);
  if (f.w.size() != l.frame.size()) throw Error(ErrorCode::GridMismatch, "vertical part length differs from path");
}

}  // namespace

LiftedTangentField lift_tangent_field(const ConnectionField& Abar, const LiftedPath& lift, const TangentField& v,
                                      const Mat& w0) {
  require_match(lift.base, v);
  const Group& G = lift.group;
  const SampledPath& p = lift.base;
  const double h = p.step();
  LiftedTangentField out{v, std::vector<Mat>(p.N() + 1)};
  out.w[0] = w0;
  for (int k = 0; k < p.N(); ++k) {
    const double area = wedge(p.dx_mid[k], v.v_mid[k]);
    Mat inc = G.zero_algebra();
    if (area != 0.0) {
      const Mat& fm = lift.frame_mid[k];
      inc = ad(G.inverse(fm), fm, Mat(area * curvature(Abar, p.x_mid[k])));
    }
    out.w[k + 1] = out.w[k] + h * inc;
  }
  return out;
}

std::vector<Mat> curvature_integrand(const ConnectionField& Abar, const LiftedPath& lift, const TangentField& v) {
  require_match(lift.base, v);
  const Group& G = lift.group;
  const SampledPath& p = lift.base;
  std::vector<Mat> f(p.N() + 1);
  for (int k = 0; k <= p.N(); ++k) {
    const Mat& fr = lift.frame[k];
    f[k] = ad(G.inverse(fr), fr, Mat(wedge(p.dx[k], v.v[k]) * curvature(Abar, p.x[k])));
  }
  return f;
}

double stokes_residual(const ConnectionField& Abar, const LiftedPath& lift, const LiftedTangentField& field,
                       int T_index) {
  require_match(lift, field);
  if (T_index < 0 || T_index > lift.base.N()) throw Error(ErrorCode::IndexOutOfRange, "T index");
  if (T_index == 0) return 0.0;
  const auto f = curvature_integrand(Abar, lift, field.v);
  const auto I = cumulative_simpson(f, lift.base.step());
  return norm(field.w[T_index] - field.w[0] - I[T_index]);
}

double stokes_residual_max(const ConnectionField& Abar, const LiftedPath& lift, const LiftedTangentField& field) {
  require_match(lift, field);
  const auto f = curvature_integrand(Abar, lift, field.v);
  const auto I = cumulative_simpson(f, lift.base.step());
  double r = 0.0;
  for (int k = 1; k <= lift.base.N(); ++k) r = std::max(r, norm(field.w[k] - field.w[0] - I[k]));
  return r;
}

double tangency_residual(const ConnectionField& Abar, const LiftedPath& lift, const LiftedTangentField& field) {
  require_match(lift, field);
  const auto f = curvature_integrand(Abar, lift, field.v);
  const double h = lift.base.step();
  double r = 0.0;
  for (int k = 1; k < lift.base.N(); ++k)
    r = std::max(r, norm((field.w[k + 1] - field.w[k - 1]) / (2.0 * h) - f[k]));
  return r;
}

namespace {

std::vector<Mat> two_form_integrand(const TwoFormField& B, const CrossedModule& cm, const LiftedPath& lift,
                                    const TangentField& v) {
  require_match(lift.base, v);
  const SampledPath& p = lift.base;
  std::vector<Mat> f(p.N() + 1);
  for (int k = 0; k <= p.N(); ++k) {
    const double area = wedge(p.dx[k], v.v[k]);
    f[k] = area == 0.0 ? B.group().zero_algebra()
                       : cm.alpha_alg(lift.group.inverse(lift.frame[k]), Mat(area * B(p.x[k])));
  }
  return f;
}

}  // namespace

Mat chen_integral_2form(const TwoFormField& B, const CrossedModule& cm, const LiftedPath& lift, const TangentField& v) {
  return simpson(two_form_integrand(B, cm, lift, v), lift.base.step());
}

Mat chen_integral_2form(const TwoFormField& B, const CrossedModule& cm, const LiftedPath& lift,
                        const LiftedTangentField& field) {
  return chen_integral_2form(B, cm, lift, field.v);
}

Mat theta_eval(const TwoFormField& B, const CrossedModule& cm, const ConnectionField& Abar, const SampledPath& gamma,
               const TangentField& v, const Mat& seed) {
  return chen_integral_2form(B, cm, horizontal_lift_path(Abar, gamma, seed), v);
}

namespace {

// Ad(frame^-1)(A - Abar)(v) at the endpoint.
Mat endpoint_difference(const FieldSet& f, const LiftedPath& lift, const Vec2& v) {
  const int N = lift.base.N();
  const Vec2& x = lift.base.x[N];
  const Mat diff = f.A.along(x, v) - f.Abar.along(x, v);
  const Mat& fr = lift.frame[N];
  return ad(lift.group.inverse(fr), fr, diff);
}

}  // namespace

Mat omega_eval(const FieldSet& f, const LiftedPath& lift, const LiftedTangentField& field) {
  require_match(lift, field);
  const int N = lift.base.N();
  const Mat A_end = endpoint_difference(f, lift, field.v.v[N]) + field.w[N];
  return A_end + f.cm->tau_alg(chen_integral_2form(f.B, *f.cm, lift, field.v));
}

ConnectionAxiomReport connection_axioms_check(const FieldSet& f, const LiftedPath& lift, const TangentField& v,
                                              int n_samples, std::uint64_t seed) {
  require_match(lift.base, v);
  const Group& G = lift.group;
  const int N = lift.base.N();
  Rng rng(seed);
  ConnectionAxiomReport r;
  const TangentField zero = scaled(v, 0.0);
  for (int k = 0; k < n_samples; ++k) {
    const Mat X = random_algebra(G, rng, 1.0);
    const LiftedTangentField vertical{zero, std::vector<Mat>(N + 1, X)};
    r.vertical = std::max(r.vertical, norm(Mat(omega_eval(f, lift, vertical) - X)));

    const LiftedTangentField field = lift_tangent_field(f.Abar, lift, v, random_algebra(G, rng, 1.0));
    const Mat g = random_element(G, rng, 1.5);
    const Mat gi = G.inverse(g);
    const Mat moved = omega_eval(f, right_translate(lift, g), right_translate(field, G, g));
    r.equivariance = std::max(r.equivariance, norm(Mat(moved - ad(gi, g, omega_eval(f, lift, field)))));
  }
  return r;
}

Mat omega_local_eval(const FieldSet& f, const LiftedPath& sigma_lift, const TangentField& V, OmegaTerms terms) {
  require_match(sigma_lift.base, V);
  const SampledPath& p = sigma_lift.base;
  const Group& G = sigma_lift.group;
  const int N = p.N();
  std::vector<Mat> integrand(N + 1);
  for (int k = 0; k <= N; ++k) {
    const double area = wedge(p.dx[k], V.v[k]);
    if (area == 0.0) {
      integrand[k] = G.zero_algebra();
      continue;
    }
    Mat form = curvature(f.Abar, p.x[k]);
    if (terms == OmegaTerms::Full) form += f.cm->tau_alg(f.B(p.x[k]));
    const Mat& fr = sigma_lift.frame[k];
    integrand[k] = ad(G.inverse(fr), fr, Mat(area * form));
  }
  return f.Abar.along(p.x[0], V.v[0]) + endpoint_difference(f, sigma_lift, V.v[N]) + simpson(integrand, p.step());
}

Mat omega_local_eval(const FieldSet& f, const SampledPath& gamma, const TangentField& V) {
  return omega_local_eval(f, path_holonomy(f.Abar, gamma), V);
}

Mat omega_local_eval_truncated(const FieldSet& f, const SampledPath& gamma, const TangentField& V) {
  require_match(gamma, V);
  const LiftedPath lift = path_holonomy(f.Abar, gamma);
  const int N = gamma.N();
  const Mat& fr = lift.frame[N];
  const Mat end = ad(lift.group.inverse(fr), fr, f.A.along(gamma.x[N], V.v[N]));
  const Mat Z = chen_integral_2form(f.B, *f.cm, lift, V);
  // tau(alpha(g^-1) K) = Ad(g^-1) tau(K), so the frame twist can be applied on either side of tau.
  return end + f.cm->tau_alg(Z);
}

LiftedTangentField omega_horizontal_lift(const FieldSet& f, const LiftedPath& lift, const TangentField& v) {
  require_match(lift.base, v);
  const int N = lift.base.N();
  const Mat Z = chen_integral_2form(f.B, *f.cm, lift, v);
  const Mat w1 = -endpoint_difference(f, lift, v.v[N]) - f.cm->tau_alg(Z);
  const auto I = cumulative_simpson(curvature_integrand(f.Abar, lift, v), lift.base.step());
  LiftedTangentField out{v, std::vector<Mat>(N + 1)};
  for (int k = 0; k <= N; ++k) out.w[k] = w1 - (I[N] - I[k]);
  return out;
}

OmegaLiftReport omega_lift_check(const FieldSet& f, const LiftedPath& lift, const LiftedTangentField& field) {
  OmegaLiftReport rep;
  rep.omega = norm(omega_eval(f, lift, field));
  const auto I = cumulative_simpson(curvature_integrand(f.Abar, lift, field.v), lift.base.step());
  for (int k = 0; k <= lift.base.N(); ++k)
    rep.cross_form = std::max(rep.cross_form, norm(field.w[k] - (field.w[0] + I[k])));
  rep.tangency = tangency_residual(f.Abar, lift, field);
  return rep;
}

Mat chen_product_2form(const TwoFormField& B1, const TwoFormField& B2, const CrossedModule& cm,
                       const LiftedPath& lift, const TangentField& X, const TangentField& Y) {
  const double h = lift.base.step();
  auto f1 = two_form_integrand(B1, cm, lift, X);
  auto f2 = two_form_integrand(B2, cm, lift, Y);
  for (Mat& m : f1) m = cm.tau_alg(m);
  for (Mat& m : f2) m = cm.tau_alg(m);
  // The tensor-product Simpson sum of [P(u), Q(v)] factors through bilinearity.
  return commutator(simpson(f1, h), simpson(f2, h));
}

namespace {

class VariedPath final : public PathMap {
 public:
  VariedPath(PathVariation var, double u, double v) : var_(std::move(var)), u_(u), v_(v) {}
  Vec2 point(double t) const override { return var_.base->point(t) + u_ * var_.X(t) + v_ * var_.Y(t); }
  Vec2 velocity(double t) const override {
    return var_.base->velocity(t) + u_ * var_.dX(t) + v_ * var_.dY(t);
  }

 private:
  PathVariation var_;
  double u_, v_;
};

}  // namespace

PathMapPtr varied_path(const PathVariation& var, double u, double v) {
  return std::make_shared<VariedPath>(var, u, v);
}

CurvatureReport omega_curvature_eval(const FieldSet& f, const PathVariation& var, int N, double fd_step) {
  if (!(fd_step > 1e-7 && fd_step <= 1e-1))
    throw Error(ErrorCode::VariationTooCoarse, "finite-difference step " + std::to_string(fd_step) +
                                                   " outside (1e-7, 1e-1]");
  const TangentField X = sample_tangent(var.X, N);
  const TangentField Y = sample_tangent(var.Y, N);
  auto theta = [&](double u, double v, const TangentField& field) {
    const SampledPath p = sample_path(*varied_path(var, u, v), N);
    return Mat(f.cm->tau_alg(chen_integral_2form(f.B, *f.cm, path_holonomy(f.Abar, p), field)));
  };

  const SampledPath p0 = sample_path(*var.base, N);
  const LiftedPath lift = path_holonomy(f.Abar, p0);
  const Group& G = lift.group;
  const Vec2& x1 = p0.x[N];
  const Mat& a1 = lift.frame[N];
  const Mat a1i = G.inverse(a1);

  CurvatureReport rep;
  const Mat FA = curvature(f.A, x1) * wedge(X.v[N], Y.v[N]);
  rep.endpoint = ad(a1i, a1, FA);

  const double e = fd_step;
  rep.d_term = (theta(e, 0, Y) - theta(-e, 0, Y) - theta(0, e, X) + theta(0, -e, X)) / (2.0 * e);

  auto A_end = [&](const TangentField& V) {
    const LiftedTangentField lt = lift_tangent_field(f.Abar, lift, V, f.Abar.along(p0.x[0], V.v[0]));
    const Mat diff = f.A.along(x1, V.v[N]) - f.Abar.along(x1, V.v[N]);
    return Mat(ad(a1i, a1, diff) + lt.w[N]);
  };
  const Mat thX = theta(0, 0, X), thY = theta(0, 0, Y);
  rep.cross = commutator(A_end(X), thY) - commutator(A_end(Y), thX);
  rep.product = commutator(thX, thY);
  rep.total = rep.endpoint + rep.d_term + rep.cross + rep.product;
  return rep;
}

}  // namespace pathgauge
