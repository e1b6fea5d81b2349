#pragma once

#include <vector>

#include "pathgauge/pathspace.hpp"

namespace pathgauge {

/**
 * Lift of a path of paths: rows are Abar-horizontal (seeded e at t = 0) and the
 * left edge s -> Gamma(0, s) is A-horizontal. The frame at node (i, j) is
 * abar_s(t) a_0(s) seed.
 */
struct LiftedSurface {
  SurfaceGrid grid;
  Mat seed;
  std::vector<Mat> left_edge;    ///< a_0(s_j)
  std::vector<LiftedPath> rows;  ///< abar_{s_j}(t_i)

  Mat frame(int i, int j) const;
};

LiftedSurface surface_lift(const ConnectionField& Abar, const ConnectionField& A, const SurfaceGrid& grid,
                           const Mat& seed);

/// a_t(s_j) for every j: A-transport up s -> Gamma(t_i, s).
std::vector<Mat> edge_transport(const ConnectionField& A, const SurfaceGrid& grid, int t_index);

/**
 * Bi-holonomy by explicit loop composition: Abar along Gamma_0 to t, A up
 * Gamma^t to s, Abar back along Gamma_s reversed, A down Gamma^0 reversed.
 * Returns g with end point = start point times g.
 */
Mat biholonomy(const ConnectionField& Abar, const ConnectionField& A, const SurfaceGrid& grid, int t_index,
               int s_index);

/// g(1, s_j) = a_0^-1 abar_s(1)^-1 a_1 abar_0(1) from lift frames and right-edge frames.
std::vector<Mat> biholonomy_closed_form(const LiftedSurface& lift, const std::vector<Mat>& right_edge);

/// g(1, s_j) for every j by loop composition.
std::vector<Mat> biholonomy_right_edge(const ConnectionField& Abar, const ConnectionField& A, const SurfaceGrid& grid);

/**
 * h_0(s_j) solving dh/ds h^-1 = -int alpha((abar_s(t) a_0(s) g(1,s))^-1) B_sigma(d_t Gamma, d_s Gamma) dt,
 * h_0(0) = e: Simpson in t, exponential trapezoid in s.
 */
std::vector<Mat> surface_holonomy(const FieldSet& f, const LiftedSurface& lift, const std::vector<Mat>& g1);
std::vector<Mat> surface_holonomy(const FieldSet& f, const SurfaceGrid& grid);

/// c(s_j) solving c' = -W(s) c with W(s) the sigma~-pulled-back omega on V_s = d_s Gamma.
std::vector<Mat> omega_transport_local(const FieldSet& f, const LiftedSurface& lift,
                                       OmegaTerms terms = OmegaTerms::Full);
std::vector<Mat> omega_transport_local(const FieldSet& f, const SurfaceGrid& grid);

struct TgbReport {
  double residual = 0.0;  ///< max_s |c - a_0 g(1,s) tau(h_0)|
  std::vector<Mat> c, a0, g1, h0;
};

TgbReport verify_tgb(const FieldSet& f, const SurfaceGrid& grid);

/**
 * Transport by ev_1^* A two ways: c^ from its own ODE and a_0(s) g(1,s) from loop
 * composition. Returns max over nodes of |abar_s(t) c^(s) - abar_s(t) a_0(s) g(1,s)|.
 */
double ev1_transport_check(const FieldSet& f, const SurfaceGrid& grid);

/**
 * b_s in H with db/ds b^-1 = -Z(d_s Gamma^) over the frames abar_s(t) c^(s) of the
 * ev_1^* A transport. Coincides with h_0 when all G frames are trivial.
 */
std::vector<Mat> theta_transport(const FieldSet& f, const SurfaceGrid& grid);

/// Grid of Gamma o Phi with the same sample counts (validates Phi first).
SurfaceGrid reparametrize_surface(const SurfaceGrid& grid, const Reparametrization& phi);

struct ReparamOptions {
  bool enforce_condition = true;  ///< throw ConditionViolated when the hypotheses fail
  int refine = 4;                 ///< comparison grid has refine * N_t intervals
};

struct ReparamReport {
  double residual = 0.0;         ///< max of frame and point residuals
  double frame_residual = 0.0;
  double point_residual = 0.0;
  double fake_curvature = 0.0;   ///< max over grid nodes
};

/**
 * Transports Gamma~_0 o Phi_0 along (Gamma o Phi)_s and compares the result at s = 1
 * with Gamma~_1 o Phi_1, both interpolated by cubic B-splines onto a refined grid.
 * Mode i needs F^Abar + tau B = 0; mode ii is exercised only with A = Abar.
 */
ReparamReport verify_reparam(const FieldSet& f, const SurfaceGrid& grid, const Reparametrization& phi,
                             const ReparamOptions& options = {});

struct HalfPathReport {
  double difference = 0.0;  ///< max_t in [0, 1/2] of |full-surface frame - left-half frame| at s = 1
};

/// Transports the left half t in [0, 1/2] on its own and compares with the full transport.
HalfPathReport halfpath_demo(const FieldSet& f, const SurfaceGrid& grid);

}  // namespace pathgauge
