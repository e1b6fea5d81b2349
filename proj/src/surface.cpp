#include "pathgauge/surface.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "pathgauge/quadrature.hpp"

namespace pathgauge {

Mat LiftedSurface::frame(int i, int j) const { return rows[j].frame[i] * left_edge[j] * seed; }

namespace {

// Lie-midpoint transport along an analytic path with any number of steps (steps = 0 gives e).
Mat transport_steps(const ConnectionField& A, const PathMap& path, int steps) {
  const Group& G = A.group();
  Mat g = G.identity();
  if (steps <= 0) return g;
  const double h = 1.0 / steps;
  for (int k = 0; k < steps; ++k) {
    const double t = (k + 0.5) * h;
    g = G.exp(Mat(-h * A.along(path.point(t), path.velocity(t)))) * g;
  }
  return g;
}

// Exponential trapezoid for y' = -X(s) y on the s grid of the surface.
std::vector<Mat> exp_trapezoid(const Group& G, const std::vector<Mat>& X, double ds, const Mat& y0) {
  std::vector<Mat> y(X.size());
  y[0] = y0;
  for (std::size_t j = 0; j + 1 < X.size(); ++j) y[j + 1] = G.exp(Mat(-0.5 * ds * (X[j] + X[j + 1]))) * y[j];
  return y;
}

// int alpha(frame(t)^-1) B(d_t Gamma, d_s Gamma) dt along row j.
Mat twisted_flux(const FieldSet& f, const SurfaceGrid& grid, int j, const std::vector<Mat>& frames) {
  const Group& G = f.cm->G();
  std::vector<Mat> integrand(grid.Nt + 1);
  for (int i = 0; i <= grid.Nt; ++i) {
    const int n = grid.index(i, j);
    const double area = wedge(grid.dt[n], grid.ds[n]);
    integrand[i] = area == 0.0 ? f.B.group().zero_algebra()
                               : f.cm->alpha_alg(G.inverse(frames[i]), Mat(area * f.B(grid.points[n])));
  }
  return simpson(integrand, 1.0 / grid.Nt);
}

// H-valued transport driven by the twisted flux over the given frames (frames[j][i] at node (i, j)).
std::vector<Mat> flux_transport(const FieldSet& f, const SurfaceGrid& grid, const std::vector<std::vector<Mat>>& frames) {
  std::vector<Mat> K(grid.Ns + 1);
  for (int j = 0; j <= grid.Ns; ++j) K[j] = twisted_flux(f, grid, j, frames[j]);
  const Group H = f.cm->H();
  return exp_trapezoid(H, K, 1.0 / grid.Ns, H.identity());
}

}  // namespace

std::vector<Mat> edge_transport(const ConnectionField& A, const SurfaceGrid& grid, int t_index) {
  if (t_index < 0 || t_index > grid.Nt) throw Error(ErrorCode::IndexOutOfRange, "t index out of range");
  return path_holonomy(A, grid.column(t_index)).frame;
}

LiftedSurface surface_lift(const ConnectionField& Abar, const ConnectionField& A, const SurfaceGrid& grid,
                           const Mat& seed) {
  LiftedSurface lift{grid, seed, edge_transport(A, grid, 0), {}};
  lift.rows.reserve(grid.Ns + 1);
  for (int j = 0; j <= grid.Ns; ++j) lift.rows.push_back(path_holonomy(Abar, grid.row(j)));
  return lift;
}

Mat biholonomy(const ConnectionField& Abar, const ConnectionField& A, const SurfaceGrid& grid, int t_index,
               int s_index) {
  if (t_index < 0 || t_index > grid.Nt || s_index < 0 || s_index > grid.Ns)
    throw Error(ErrorCode::IndexOutOfRange, "biholonomy node out of range");
  const double t = grid.t[t_index], s = grid.s[s_index];
  const SurfaceMapPtr& m = grid.map;
  const Mat bottom = transport_steps(Abar, *restricted(row_path(m, 0.0), 0.0, t), t_index);
  const Mat up = transport_steps(A, *restricted(column_path(m, t), 0.0, s), s_index);
  const Mat back = transport_steps(Abar, *reversed(restricted(row_path(m, s), 0.0, t)), t_index);
  const Mat down = transport_steps(A, *reversed(restricted(column_path(m, 0.0), 0.0, s)), s_index);
  return down * back * up * bottom;
}

std::vector<Mat> biholonomy_closed_form(const LiftedSurface& lift, const std::vector<Mat>& right_edge) {
  const Group& G = lift.rows.front().group;
  const int Nt = lift.grid.Nt;
  const Mat abar0 = lift.rows[0].frame[Nt];
  std::vector<Mat> g(lift.rows.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    g[j] = G.inverse(lift.left_edge[j]) * G.inverse(lift.rows[j].frame[Nt]) * right_edge[j] * abar0;
  return g;
}

std::vector<Mat> biholonomy_right_edge(const ConnectionField& Abar, const ConnectionField& A,
                                       const SurfaceGrid& grid) {
  std::vector<Mat> g(grid.Ns + 1);
  for (int j = 0; j <= grid.Ns; ++j) g[j] = biholonomy(Abar, A, grid, grid.Nt, j);
  return g;
}

std::vector<Mat> surface_holonomy(const FieldSet& f, const LiftedSurface& lift, const std::vector<Mat>& g1) {
  const SurfaceGrid& grid = lift.grid;
  std::vector<std::vector<Mat>> frames(grid.Ns + 1, std::vector<Mat>(grid.Nt + 1));
  for (int j = 0; j <= grid.Ns; ++j)
    for (int i = 0; i <= grid.Nt; ++i) frames[j][i] = lift.rows[j].frame[i] * lift.left_edge[j] * g1[j];
  return flux_transport(f, grid, frames);
}

std::vector<Mat> surface_holonomy(const FieldSet& f, const SurfaceGrid& grid) {
  f.validate();
  const LiftedSurface lift = surface_lift(f.Abar, f.A, grid, f.cm->G().identity());
  return surface_holonomy(f, lift, biholonomy_right_edge(f.Abar, f.A, grid));
}

std::vector<Mat> omega_transport_local(const FieldSet& f, const LiftedSurface& lift, OmegaTerms terms) {
  const SurfaceGrid& grid = lift.grid;
  std::vector<Mat> W(grid.Ns + 1);
  for (int j = 0; j <= grid.Ns; ++j) W[j] = omega_local_eval(f, lift.rows[j], grid.row_variation(j), terms);
  const Group& G = lift.rows.front().group;
  return exp_trapezoid(G, W, 1.0 / grid.Ns, G.identity());
}

std::vector<Mat> omega_transport_local(const FieldSet& f, const SurfaceGrid& grid) {
  f.validate();
  return omega_transport_local(f, surface_lift(f.Abar, f.A, grid, f.cm->G().identity()));
}

TgbReport verify_tgb(const FieldSet& f, const SurfaceGrid& grid) {
  f.validate();
  const LiftedSurface lift = surface_lift(f.Abar, f.A, grid, f.cm->G().identity());
  TgbReport r;
  r.a0 = lift.left_edge;
  r.g1 = biholonomy_right_edge(f.Abar, f.A, grid);
  r.h0 = surface_holonomy(f, lift, r.g1);
  r.c = omega_transport_local(f, lift);
  for (int j = 0; j <= grid.Ns; ++j) {
    const Mat predicted = r.a0[j] * r.g1[j] * f.cm->tau(r.h0[j]);
    r.residual = std::max(r.residual, norm(Mat(r.c[j] - predicted)));
  }
  return r;
}

double ev1_transport_check(const FieldSet& f, const SurfaceGrid& grid) {
  f.validate();
  const LiftedSurface lift = surface_lift(f.Abar, f.A, grid, f.cm->G().identity());
  const std::vector<Mat> c_hat = omega_transport_local(f, lift, OmegaTerms::EndpointOnly);
  const std::vector<Mat> g1 = biholonomy_right_edge(f.Abar, f.A, grid);
  double r = 0.0;
  for (int j = 0; j <= grid.Ns; ++j) {
    const Mat diff = c_hat[j] - lift.left_edge[j] * g1[j];
    for (int i = 0; i <= grid.Nt; ++i) r = std::max(r, norm(Mat(lift.rows[j].frame[i] * diff)));
  }
  return r;
}

std::vector<Mat> theta_transport(const FieldSet& f, const SurfaceGrid& grid) {
  f.validate();
  const LiftedSurface lift = surface_lift(f.Abar, f.A, grid, f.cm->G().identity());
  const std::vector<Mat> c_hat = omega_transport_local(f, lift, OmegaTerms::EndpointOnly);
  std::vector<std::vector<Mat>> frames(grid.Ns + 1, std::vector<Mat>(grid.Nt + 1));
  for (int j = 0; j <= grid.Ns; ++j)
    for (int i = 0; i <= grid.Nt; ++i) frames[j][i] = lift.rows[j].frame[i] * c_hat[j];
  return flux_transport(f, grid, frames);
}

SurfaceGrid reparametrize_surface(const SurfaceGrid& grid, const Reparametrization& phi) {
  phi.validate(std::max(grid.Nt, grid.Ns));
  return make_surface_grid(reparametrized(grid.map, phi), grid.Nt, grid.Ns);
}

namespace {

// Cubic B-spline through uniform samples of every real and imaginary matrix entry.
class FrameSpline {
 public:
  explicit FrameSpline(const std::vector<Mat>& samples) : rows_(samples.front().rows()), cols_(samples.front().cols()) {
    const double h = 1.0 / (samples.size() - 1);
    for (int a = 0; a < rows_; ++a)
      for (int b = 0; b < cols_; ++b)
        for (int part = 0; part < 2; ++part) {
          std::vector<double> y(samples.size());
          for (std::size_t k = 0; k < samples.size(); ++k)
            y[k] = part == 0 ? samples[k](a, b).real() : samples[k](a, b).imag();
          splines_.emplace_back(y.begin(), y.end(), 0.0, h);
        }
  }

  Mat operator()(double t) const {
    Mat m(rows_, cols_);
    std::size_t n = 0;
    for (int a = 0; a < rows_; ++a)
      for (int b = 0; b < cols_; ++b) {
        const double re = splines_[n++](t);
        const double im = splines_[n++](t);
        m(a, b) = cplx(re, im);
      }
    return m;
  }

 private:
  int rows_, cols_;
  std::vector<boost::math::interpolators::cardinal_cubic_b_spline<double>> splines_;
};

std::vector<Mat> final_row_frames(const FieldSet& f, const SurfaceGrid& grid) {
  const LiftedSurface lift = surface_lift(f.Abar, f.A, grid, f.cm->G().identity());
  const Mat c1 = omega_transport_local(f, lift).back();
  std::vector<Mat> out = lift.rows.back().frame;
  for (Mat& m : out) m = m * c1;
  return out;
}

}  // namespace

ReparamReport verify_reparam(const FieldSet& f, const SurfaceGrid& grid, const Reparametrization& phi,
                             const ReparamOptions& options) {
  f.validate();
  phi.validate(std::max(grid.Nt, grid.Ns));
  ReparamReport r;
  double connection_gap = 0.0;
  for (std::size_t n = 0; n < grid.points.size(); ++n) {
    const Vec2& x = grid.points[n];
    r.fake_curvature = std::max(r.fake_curvature, norm(fake_curvature(f.Abar, f.B, *f.cm, x)));
    const Components a = f.A(x), abar = f.Abar(x);
    for (int mu = 0; mu < 2; ++mu) connection_gap = std::max(connection_gap, norm(Mat(a[mu] - abar[mu])));
  }
  if (options.enforce_condition) {
    if (r.fake_curvature > 1e-8)
      throw Error(ErrorCode::ConditionViolated,
                  "fake curvature " + std::to_string(r.fake_curvature) + " exceeds 1e-8 on the surface");
    if (phi.mode == Reparametrization::Mode::II && connection_gap > 1e-12)
      throw Error(ErrorCode::ConditionViolated, "mode ii reparametrization is only supported with A = Abar");
  }

  const SurfaceGrid moved = reparametrize_surface(grid, phi);
  const FrameSpline original(final_row_frames(f, grid));
  const FrameSpline transported(final_row_frames(f, moved));

  const int M = options.refine * grid.Nt;
  for (int k = 0; k <= M; ++k) {
    const double t = static_cast<double>(k) / M;
    const double t_end = phi(t, 1.0)(0);
    r.frame_residual = std::max(r.frame_residual, norm(Mat(transported(t) - original(t_end))));
    r.point_residual = std::max(r.point_residual, (moved.map->point(t, 1.0) - grid.map->point(t_end, 1.0)).norm());
  }
  r.residual = std::max(r.frame_residual, r.point_residual);
  return r;
}

HalfPathReport halfpath_demo(const FieldSet& f, const SurfaceGrid& grid) {
  f.validate();
  int half = grid.Nt / 2;
  if (half % 2 != 0) ++half;
  const SurfaceGrid full = make_surface_grid(grid.map, 2 * half, grid.Ns);
  const SurfaceGrid left = make_surface_grid(restricted_t(grid.map, 0.0, 0.5), half, grid.Ns);
  const std::vector<Mat> full_frames = final_row_frames(f, full);
  const std::vector<Mat> left_frames = final_row_frames(f, left);
  HalfPathReport r;
  for (int i = 0; i <= half; ++i) r.difference = std::max(r.difference, norm(Mat(full_frames[i] - left_frames[i])));
  return r;
}

}  // namespace pathgauge
