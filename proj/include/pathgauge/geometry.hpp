#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "pathgauge/fields.hpp"

namespace pathgauge {

/// Smooth path [0,1] -> plane with analytic velocity.
class PathMap {
 public:
  virtual ~PathMap() = default;
  virtual Vec2 point(double t) const = 0;
  virtual Vec2 velocity(double t) const = 0;
};

using PathMapPtr = std::shared_ptr<const PathMap>;

PathMapPtr make_segment(const Vec2& from, const Vec2& to);
/// Circle arc of the given radius from angle theta0 to theta1 (radians).
PathMapPtr make_arc(const Vec2& center, double radius, double theta0, double theta1);
/// Cubic Bezier curve with control points p0..p3.
PathMapPtr make_cubic(const Vec2& p0, const Vec2& p1, const Vec2& p2, const Vec2& p3);
/// Modified Akima interpolant through (t_k, x_k); t must start at 0 and end at 1.
PathMapPtr make_point_path(std::vector<double> t, const std::vector<Vec2>& x);

PathMapPtr reversed(PathMapPtr path);
/// u -> path(t0 + (t1 - t0) u).
PathMapPtr restricted(PathMapPtr path, double t0, double t1);
/// u -> path(phi(u)) for an increasing phi fixing 0 and 1.
PathMapPtr reparametrized(PathMapPtr path, std::function<double(double)> phi, std::function<double(double)> dphi);

/**
 * Path sampled on the uniform grid t_k = k/N (N even), with values at the
 * half-step midpoints used by the Lie-midpoint stepper.
 */
struct SampledPath {
  std::vector<double> t;
  std::vector<Vec2> x, dx;
  std::vector<Vec2> x_mid, dx_mid;

  int N() const { return static_cast<int>(t.size()) - 1; }
  double step() const { return 1.0 / N(); }
};

SampledPath sample_path(const PathMap& path, int N);

/// Vector field along a sampled path, at nodes and midpoints.
struct TangentField {
  std::vector<Vec2> v, v_mid;
  int N() const { return static_cast<int>(v.size()) - 1; }
};

using TangentMap = std::function<Vec2(double)>;

TangentField sample_tangent(const TangentMap& v, int N);
TangentField scaled(const TangentField& v, double factor);
TangentField combined(double a, const TangentField& x, double b, const TangentField& y);

TangentMap constant_tangent(const Vec2& v);
TangentMap linear_tangent(const Vec2& from, const Vec2& to);
/// sin(pi t) dir: vanishes at both endpoints.
TangentMap bump_tangent(const Vec2& dir);

/// Smooth map [0,1]^2 -> plane, (t, s) -> Gamma_s(t), with analytic partials.
class SurfaceMap {
 public:
  virtual ~SurfaceMap() = default;
  virtual Vec2 point(double t, double s) const = 0;
  virtual Vec2 dt(double t, double s) const = 0;
  virtual Vec2 ds(double t, double s) const = 0;
};

using SurfaceMapPtr = std::shared_ptr<const SurfaceMap>;

/// Gamma(t, s) = origin + (scale t, scale s).
SurfaceMapPtr make_identity_square(double scale = 1.0, const Vec2& origin = Vec2::Zero());
/// Gamma = (t + amp t(1-t) sin(pi s), s + amp s(1-s) sin(pi t)).
SurfaceMapPtr make_warp(double amplitude);
/// Gamma_s = path for every s.
SurfaceMapPtr make_constant_surface(PathMapPtr path);
/// Local bicubic Lagrange interpolation of samples on a uniform (Nt+1) x (Ns+1) grid,
/// points indexed [i + (Nt+1) j].
SurfaceMapPtr make_point_surface(int Nt, int Ns, std::vector<Vec2> points);
/// (t, s) -> Gamma(t0 + (t1 - t0) t, s).
SurfaceMapPtr restricted_t(SurfaceMapPtr surface, double t0, double t1);

/// t -> Gamma(t, s).
PathMapPtr row_path(SurfaceMapPtr surface, double s);
/// s -> Gamma(t, s).
PathMapPtr column_path(SurfaceMapPtr surface, double t);
/// t -> partial_s Gamma(t, s).
TangentMap row_variation(SurfaceMapPtr surface, double s);

/**
 * Polynomial diffeomorphism of the unit square fixing the vertices,
 * (t, s) -> (phi(t, s), psi(t, s)) with
 *   phi = t + a s t (1 - t)
 *   psi = s + b s (1 - s)                    mode i  (s-sections to s-sections)
 *   psi = s + b s (1 - s) (1 + t (1 - t))    mode ii (psi(0, s) = psi(1, s))
 * so that phi(., 0) is the identity.
 */
struct Reparametrization {
  enum class Mode { I, II };
  double a = 0.0;
  double b = 0.0;
  Mode mode = Mode::I;

  Vec2 operator()(double t, double s) const;
  /// Columns d/dt and d/ds of (phi, psi).
  Eigen::Matrix2d jacobian(double t, double s) const;
  /// Throws NotDiffeo unless both diagonal partials are positive on an n x n grid
  /// and the Jacobian determinant is positive.
  void validate(int n) const;
  /// Newton inverse of the map.
  Vec2 inverse(double T, double S) const;
};

SurfaceMapPtr reparametrized(SurfaceMapPtr surface, const Reparametrization& phi);

/// Surface sampled on uniform grids with partials at the nodes.
struct SurfaceGrid {
  SurfaceMapPtr map;
  int Nt = 0, Ns = 0;
  std::vector<double> t, s;
  std::vector<Vec2> points, dt, ds;  ///< indexed [i + (Nt+1) j]

  int index(int i, int j) const { return i + (Nt + 1) * j; }
  SampledPath row(int j) const;
  TangentField row_variation(int j) const;
  /// s -> Gamma(t_i, s).
  SampledPath column(int i) const;
};

/// Nt, Ns even and at least 2, else GridMismatch.
SurfaceGrid make_surface_grid(SurfaceMapPtr surface, int Nt, int Ns);

/// Max deviation of the stored partials from central differences of the node points.
double partials_fd_residual(const SurfaceGrid& grid);

}  // namespace pathgauge
