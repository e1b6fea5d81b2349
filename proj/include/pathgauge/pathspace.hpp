#pragma once

#include <vector>

#include "pathgauge/fields.hpp"
#include "pathgauge/geometry.hpp"

namespace pathgauge {

/// The data (Abar, A, B) over a crossed module, in the global trivialization.
struct FieldSet {
  CrossedModulePtr cm;
  ConnectionField Abar;
  ConnectionField A;
  TwoFormField B;

  /// Throws TagMismatch unless Abar, A live in G and B in H.
  void validate() const;
};

/**
 * Abar-horizontal path over a sampled base path, as frames in G:
 * the lift is t -> (gamma(t), frame[t]). frame_mid holds the half-step
 * values used by the midpoint quadrature of tangent lifts.
 */
struct LiftedPath {
  Group group;
  SampledPath base;
  std::vector<Mat> frame;
  std::vector<Mat> frame_mid;
};

/**
 * Tangent vector to the space of horizontal paths: base components v and
 * w[k] = Abar(v~(t_k)) in LG.
 */
struct LiftedTangentField {
  TangentField v;
  std::vector<Mat> w;
};

/// Solves abar' = -Abar(gamma') abar, abar(0) = e, by the Lie-midpoint stepper.
LiftedPath path_holonomy(const ConnectionField& Abar, const SampledPath& gamma);

/// Same ODE started from seed.
LiftedPath horizontal_lift_path(const ConnectionField& Abar, const SampledPath& gamma, const Mat& seed);

/// Endpoint of the transport only.
Mat transport(const ConnectionField& A, const SampledPath& gamma);

/// Horizontal path translated on the right by a constant g.
LiftedPath right_translate(const LiftedPath& lift, const Mat& g);
/// Pushforward of a tangent field under right translation: w -> Ad(g^-1) w.
LiftedTangentField right_translate(const LiftedTangentField& field, const Group& G, const Mat& g);

/// Integrates dw/dt = Ad(frame^-1) F(gamma', v) from w(0) = w0 with the midpoint rule.
LiftedTangentField lift_tangent_field(const ConnectionField& Abar, const LiftedPath& lift, const TangentField& v,
                                      const Mat& w0);

/// Ad(frame_k^-1) F_sigma(gamma'(t_k), v(t_k)) at every node.
std::vector<Mat> curvature_integrand(const ConnectionField& Abar, const LiftedPath& lift, const TangentField& v);

/// |w(T) - w(0) - int_0^T Ad(frame^-1) F(gamma', v) dt| with T = t[T_index].
double stokes_residual(const ConnectionField& Abar, const LiftedPath& lift, const LiftedTangentField& field,
                       int T_index);
/// Max of stokes_residual over every grid point T.
double stokes_residual_max(const ConnectionField& Abar, const LiftedPath& lift, const LiftedTangentField& field);

/// Max over interior nodes of |central difference of w - curvature integrand|.
double tangency_residual(const ConnectionField& Abar, const LiftedPath& lift, const LiftedTangentField& field);

/// Z = int_0^1 alpha(frame^-1) B_sigma(gamma', v) dt by Simpson.
Mat chen_integral_2form(const TwoFormField& B, const CrossedModule& cm, const LiftedPath& lift, const TangentField& v);
Mat chen_integral_2form(const TwoFormField& B, const CrossedModule& cm, const LiftedPath& lift,
                        const LiftedTangentField& field);

/// theta(v) over the horizontal lift of gamma starting at seed.
Mat theta_eval(const TwoFormField& B, const CrossedModule& cm, const ConnectionField& Abar, const SampledPath& gamma,
               const TangentField& v, const Mat& seed);

/// A(v~(1)) + tau(Z(v~)).
Mat omega_eval(const FieldSet& f, const LiftedPath& lift, const LiftedTangentField& field);

struct ConnectionAxiomReport {
  double vertical = 0.0;      ///< max |omega(0, X) - X| over random generators X
  double equivariance = 0.0;  ///< max |omega(R_g lift) - Ad(g^-1) omega(lift)| over random g
};

/// Both connection axioms of omega on the lifts of v along lift, over n random samples.
ConnectionAxiomReport connection_axioms_check(const FieldSet& f, const LiftedPath& lift, const TangentField& v,
                                              int n_samples, std::uint64_t seed);

enum class OmegaTerms {
  Full,        ///< ev_1^* A + tau Z
  EndpointOnly ///< ev_1^* A alone
};

/**
 * Pullback of omega by the section sigma~ (lift seeded at e), evaluated as
 *   Abar(V(0)) + Ad(abar(1)^-1)(A - Abar)(V(1)) + int Ad(abar^-1)(F^Abar + tau B)(gamma', V) dt.
 * sigma_lift must be the holonomy of f.Abar along its base.
 */
Mat omega_local_eval(const FieldSet& f, const LiftedPath& sigma_lift, const TangentField& V,
                     OmegaTerms terms = OmegaTerms::Full);
Mat omega_local_eval(const FieldSet& f, const SampledPath& gamma, const TangentField& V);

/**
 * The shorter closed form Ad(abar(1)^-1) A(V(1)) + int Ad(abar^-1) tau B(gamma', V) dt.
 * It drops the endpoint term abar(1)^-1 d_s abar(1), so it equals
 * omega_local_eval only when that term vanishes (for instance Abar = 0).
 */
Mat omega_local_eval_truncated(const FieldSet& f, const SampledPath& gamma, const TangentField& V);

/**
 * omega-horizontal lift of v along lift: w(1) = -Ad(frame(1)^-1)(A - Abar)(v(1)) - tau Z,
 * w(t) = w(1) - int_t^1 Ad(frame^-1) F(gamma', v), the backward integral taken as total
 * minus prefix of the forward cumulative Simpson table.
 */
LiftedTangentField omega_horizontal_lift(const FieldSet& f, const LiftedPath& lift, const TangentField& v);

struct OmegaLiftReport {
  double omega = 0.0;       ///< |omega(lift)|
  double cross_form = 0.0;  ///< max_t |backward form - forward form w(0) + int_0^t F|
  double tangency = 0.0;
};

OmegaLiftReport omega_lift_check(const FieldSet& f, const LiftedPath& lift, const LiftedTangentField& field);

/// int int [tau B1(gamma'(u), X(u)), tau B2(gamma'(v), Y(v))] du dv, frame-twisted, tensor Simpson.
Mat chen_product_2form(const TwoFormField& B1, const TwoFormField& B2, const CrossedModule& cm,
                       const LiftedPath& lift, const TangentField& X, const TangentField& Y);

/// Two-parameter variation gamma(t) + u X(t) + v Y(t) of a base path.
struct PathVariation {
  PathMapPtr base;
  TangentMap X, dX;  ///< field and its t-derivative
  TangentMap Y, dY;
};

PathMapPtr varied_path(const PathVariation& var, double u, double v);

struct CurvatureReport {
  Mat total;
  Mat endpoint;   ///< ev_1^* F^A
  Mat d_term;     ///< d(int tau B), central differences along (u, v)
  Mat cross;      ///< [ev_1^* A ^ int tau B]
  Mat product;    ///< (int)^2 [tau B ^ tau B]
  const char* d_method = "FD-d";
};

/**
 * Curvature of omega at (u, v) = (0, 0) on the sigma~-lifted coordinate fields.
 * Throws VariationTooCoarse unless 1e-7 < fd_step <= 1e-1.
 */
CurvatureReport omega_curvature_eval(const FieldSet& f, const PathVariation& var, int N, double fd_step = 1e-4);

}  // namespace pathgauge
