#include "pathgauge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <boost/math/interpolators/makima.hpp>

namespace pathgauge {

namespace {

using std::numbers::pi;

class Segment final : public PathMap {
 public:
  Segment(const Vec2& a, const Vec2& b) : a_(a), d_(b - a) {}
  Vec2 point(double t) const override { return a_ + t * d_; }
  Vec2 velocity(double) const override { return d_; }

 private:
  Vec2 a_, d_;
};

class Arc final : public PathMap {
 public:
  Arc(const Vec2& c, double r, double th0, double th1) : c_(c), r_(r), th0_(th0), dth_(th1 - th0) {}
  Vec2 point(double t) const override {
    const double th = th0_ + t * dth_;
    return c_ + r_ * Vec2(std::cos(th), std::sin(th));
  }
  Vec2 velocity(double t) const override {
    const double th = th0_ + t * dth_;
    return r_ * dth_ * Vec2(-std::sin(th), std::cos(th));
  }

 private:
  Vec2 c_;
  double r_, th0_, dth_;
};

class Cubic final : public PathMap {
 public:
  Cubic(const Vec2& p0, const Vec2& p1, const Vec2& p2, const Vec2& p3) : p_{p0, p1, p2, p3} {}
  Vec2 point(double t) const override {
    const double u = 1.0 - t;
    return u * u * u * p_[0] + 3.0 * u * u * t * p_[1] + 3.0 * u * t * t * p_[2] + t * t * t * p_[3];
  }
  Vec2 velocity(double t) const override {
    const double u = 1.0 - t;
    return 3.0 * u * u * (p_[1] - p_[0]) + 6.0 * u * t * (p_[2] - p_[1]) + 3.0 * t * t * (p_[3] - p_[2]);
  }

 private:
  std::array<Vec2, 4> p_;
};

class PointPath final : public PathMap {
  using Spline = boost::math::interpolators::makima<std::vector<double>>;

 public:
  PointPath(std::vector<double> t, std::vector<double> x1, std::vector<double> x2)
      : s1_(std::vector<double>(t), std::move(x1)), s2_(std::move(t), std::move(x2)) {}
  Vec2 point(double t) const override { return {s1_(t), s2_(t)}; }
  Vec2 velocity(double t) const override { return {s1_.prime(t), s2_.prime(t)}; }

 private:
  Spline s1_, s2_;
};

class Reversed final : public PathMap {
 public:
  explicit Reversed(PathMapPtr p) : p_(std::move(p)) {}
  Vec2 point(double t) const override { return p_->point(1.0 - t); }
  Vec2 velocity(double t) const override { return -p_->velocity(1.0 - t); }

 private:
  PathMapPtr p_;
};

class Restricted final : public PathMap {
 public:
  Restricted(PathMapPtr p, double t0, double t1) : p_(std::move(p)), t0_(t0), len_(t1 - t0) {}
  Vec2 point(double u) const override { return p_->point(t0_ + len_ * u); }
  Vec2 velocity(double u) const override { return len_ * p_->velocity(t0_ + len_ * u); }

 private:
  PathMapPtr p_;
  double t0_, len_;
};

class ReparametrizedPath final : public PathMap {
 public:
  ReparametrizedPath(PathMapPtr p, std::function<double(double)> phi, std::function<double(double)> dphi)
      : p_(std::move(p)), phi_(std::move(phi)), dphi_(std::move(dphi)) {}
  Vec2 point(double u) const override { return p_->point(phi_(u)); }
  Vec2 velocity(double u) const override { return dphi_(u) * p_->velocity(phi_(u)); }

 private:
  PathMapPtr p_;
  std::function<double(double)> phi_, dphi_;
};

void require_even(int N, const char* what) {
  if (N < 2 || N % 2 != 0)
    throw Error(ErrorCode::GridMismatch, std::string(what) + " must be even and >= 2, got " + std::to_string(N));
}

}  // namespace

PathMapPtr make_segment(const Vec2& from, const Vec2& to) { return std::make_shared<Segment>(from, to); }

PathMapPtr make_arc(const Vec2& center, double radius, double theta0, double theta1) {
  return std::make_shared<Arc>(center, radius, theta0, theta1);
}

PathMapPtr make_cubic(const Vec2& p0, const Vec2& p1, const Vec2& p2, const Vec2& p3) {
  return std::make_shared<Cubic>(p0, p1, p2, p3);
}

PathMapPtr make_point_path(std::vector<double> t, const std::vector<Vec2>& x) {
  if (t.size() != x.size() || t.size() < 4)
    throw Error(ErrorCode::GridMismatch, "point path needs at least 4 samples with matching t and x");
  if (std::abs(t.front()) > 1e-14 || std::abs(t.back() - 1.0) > 1e-14)
    throw Error(ErrorCode::GridMismatch, "point path parameters must span [0, 1]");
  for (std::size_t k = 1; k < t.size(); ++k)
    if (!(t[k] > t[k - 1])) throw Error(ErrorCode::GridMismatch, "point path parameters must increase");
  std::vector<double> x1(x.size()), x2(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    x1[k] = x[k](0);
    x2[k] = x[k](1);
  }
  return std::make_shared<PointPath>(std::move(t), std::move(x1), std::move(x2));
}

PathMapPtr reversed(PathMapPtr path) { return std::make_shared<Reversed>(std::move(path)); }

PathMapPtr restricted(PathMapPtr path, double t0, double t1) {
  return std::make_shared<Restricted>(std::move(path), t0, t1);
}

PathMapPtr reparametrized(PathMapPtr path, std::function<double(double)> phi, std::function<double(double)> dphi) {
  return std::make_shared<ReparametrizedPath>(std::move(path), std::move(phi), std::move(dphi));
}

SampledPath sample_path(const PathMap& path, int N) {
  require_even(N, "path sample count");
  SampledPath p;
  p.t.resize(N + 1);
  p.x.resize(N + 1);
  p.dx.resize(N + 1);
  p.x_mid.resize(N);
  p.dx_mid.resize(N);
  const double h = 1.0 / N;
  for (int k = 0; k <= N; ++k) {
    p.t[k] = (k == N) ? 1.0 : k * h;
    p.x[k] = path.point(p.t[k]);
    p.dx[k] = path.velocity(p.t[k]);
  }
  for (int k = 0; k < N; ++k) {
    const double tm = (k + 0.5) * h;
    p.x_mid[k] = path.point(tm);
    p.dx_mid[k] = path.velocity(tm);
  }
  return p;
}

TangentField sample_tangent(const TangentMap& v, int N) {
  TangentField f;
  f.v.resize(N + 1);
  f.v_mid.resize(N);
  const double h = 1.0 / N;
  for (int k = 0; k <= N; ++k) f.v[k] = v(k == N ? 1.0 : k * h);
  for (int k = 0; k < N; ++k) f.v_mid[k] = v((k + 0.5) * h);
  return f;
}

TangentField scaled(const TangentField& v, double factor) { return combined(factor, v, 0.0, v); }

TangentField combined(double a, const TangentField& x, double b, const TangentField& y) {
  if (x.v.size() != y.v.size()) throw Error(ErrorCode::GridMismatch, "tangent fields on different grids");
  TangentField f = x;
  for (std::size_t k = 0; k < f.v.size(); ++k) f.v[k] = a * x.v[k] + b * y.v[k];
  for (std::size_t k = 0; k < f.v_mid.size(); ++k) f.v_mid[k] = a * x.v_mid[k] + b * y.v_mid[k];
  return f;
}

TangentMap constant_tangent(const Vec2& v) {
  return [v](double) { return v; };
}

TangentMap linear_tangent(const Vec2& from, const Vec2& to) {
  return [from, to](double t) { return Vec2(from + t * (to - from)); };
}

TangentMap bump_tangent(const Vec2& dir) {
  return [dir](double t) { return Vec2(std::sin(pi * t) * dir); };
}

namespace {

class IdentitySquare final : public SurfaceMap {
 public:
  IdentitySquare(double scale, const Vec2& origin) : scale_(scale), origin_(origin) {}
  Vec2 point(double t, double s) const override { return origin_ + scale_ * Vec2(t, s); }
  Vec2 dt(double, double) const override { return {scale_, 0.0}; }
  Vec2 ds(double, double) const override { return {0.0, scale_}; }

 private:
  double scale_;
  Vec2 origin_;
};

class Warp final : public SurfaceMap {
 public:
  explicit Warp(double amp) : amp_(amp) {}
  Vec2 point(double t, double s) const override {
    return {t + amp_ * t * (1 - t) * std::sin(pi * s), s + amp_ * s * (1 - s) * std::sin(pi * t)};
  }
  Vec2 dt(double t, double s) const override {
    return {1.0 + amp_ * (1 - 2 * t) * std::sin(pi * s), amp_ * s * (1 - s) * pi * std::cos(pi * t)};
  }
  Vec2 ds(double t, double s) const override {
    return {amp_ * t * (1 - t) * pi * std::cos(pi * s), 1.0 + amp_ * (1 - 2 * s) * std::sin(pi * t)};
  }

 private:
  double amp_;
};

class ConstantSurface final : public SurfaceMap {
 public:
  explicit ConstantSurface(PathMapPtr p) : p_(std::move(p)) {}
  Vec2 point(double t, double) const override { return p_->point(t); }
  Vec2 dt(double t, double) const override { return p_->velocity(t); }
  Vec2 ds(double, double) const override { return Vec2::Zero(); }

 private:
  PathMapPtr p_;
};

// Four-point Lagrange stencil on the uniform grid k/n: start index, values and
// derivative weights at u.
struct Stencil {
  int start = 0;
  int count = 0;
  std::array<double, 4> w{}, dw{};
};

Stencil lagrange_stencil(double u, int n) {
  Stencil st;
  st.count = std::min(4, n + 1);
  const int cell = std::clamp(static_cast<int>(std::floor(u * n)), 0, n - 1);
  st.start = std::clamp(cell - 1, 0, n + 1 - st.count);
  const double h = 1.0 / n;
  for (int a = 0; a < st.count; ++a) {
    const double xa = (st.start + a) * h;
    double w = 1.0, dw = 0.0;
    for (int b = 0; b < st.count; ++b) {
      if (b == a) continue;
      const double xb = (st.start + b) * h;
      const double f = (u - xb) / (xa - xb);
      dw = dw * f + w / (xa - xb);
      w *= f;
    }
    st.w[a] = w;
    st.dw[a] = dw;
  }
  return st;
}

class PointSurface final : public SurfaceMap {
 public:
  PointSurface(int Nt, int Ns, std::vector<Vec2> pts) : Nt_(Nt), Ns_(Ns), pts_(std::move(pts)) {}
  Vec2 point(double t, double s) const override { return eval(t, s, false, false); }
  Vec2 dt(double t, double s) const override { return eval(t, s, true, false); }
  Vec2 ds(double t, double s) const override { return eval(t, s, false, true); }

 private:
  Vec2 eval(double t, double s, bool dt, bool ds) const {
    const Stencil st = lagrange_stencil(t, Nt_);
    const Stencil ss = lagrange_stencil(s, Ns_);
    Vec2 out = Vec2::Zero();
    for (int b = 0; b < ss.count; ++b) {
      const double ws = ds ? ss.dw[b] : ss.w[b];
      for (int a = 0; a < st.count; ++a) {
        const double wt = dt ? st.dw[a] : st.w[a];
        out += wt * ws * pts_[(st.start + a) + (Nt_ + 1) * (ss.start + b)];
      }
    }
    return out;
  }

  int Nt_, Ns_;
  std::vector<Vec2> pts_;
};

class RestrictedT final : public SurfaceMap {
 public:
  RestrictedT(SurfaceMapPtr s, double t0, double t1) : s_(std::move(s)), t0_(t0), len_(t1 - t0) {}
  Vec2 point(double t, double s) const override { return s_->point(t0_ + len_ * t, s); }
  Vec2 dt(double t, double s) const override { return len_ * s_->dt(t0_ + len_ * t, s); }
  Vec2 ds(double t, double s) const override { return s_->ds(t0_ + len_ * t, s); }

 private:
  SurfaceMapPtr s_;
  double t0_, len_;
};

class RowPath final : public PathMap {
 public:
  RowPath(SurfaceMapPtr s, double sv) : s_(std::move(s)), sv_(sv) {}
  Vec2 point(double t) const override { return s_->point(t, sv_); }
  Vec2 velocity(double t) const override { return s_->dt(t, sv_); }

 private:
  SurfaceMapPtr s_;
  double sv_;
};

class ColumnPath final : public PathMap {
 public:
  ColumnPath(SurfaceMapPtr s, double tv) : s_(std::move(s)), tv_(tv) {}
  Vec2 point(double s) const override { return s_->point(tv_, s); }
  Vec2 velocity(double s) const override { return s_->ds(tv_, s); }

 private:
  SurfaceMapPtr s_;
  double tv_;
};

class ReparametrizedSurface final : public SurfaceMap {
 public:
  ReparametrizedSurface(SurfaceMapPtr s, Reparametrization phi) : s_(std::move(s)), phi_(phi) {}
  Vec2 point(double t, double s) const override {
    const Vec2 p = phi_(t, s);
    return s_->point(p(0), p(1));
  }
  Vec2 dt(double t, double s) const override { return chain(t, s, 0); }
  Vec2 ds(double t, double s) const override { return chain(t, s, 1); }

 private:
  Vec2 chain(double t, double s, int col) const {
    const Vec2 p = phi_(t, s);
    const Eigen::Matrix2d J = phi_.jacobian(t, s);
    return J(0, col) * s_->dt(p(0), p(1)) + J(1, col) * s_->ds(p(0), p(1));
  }

  SurfaceMapPtr s_;
  Reparametrization phi_;
};

}  // namespace

SurfaceMapPtr make_identity_square(double scale, const Vec2& origin) {
  return std::make_shared<IdentitySquare>(scale, origin);
}

SurfaceMapPtr make_warp(double amplitude) { return std::make_shared<Warp>(amplitude); }

SurfaceMapPtr make_constant_surface(PathMapPtr path) { return std::make_shared<ConstantSurface>(std::move(path)); }

SurfaceMapPtr make_point_surface(int Nt, int Ns, std::vector<Vec2> points) {
  if (Nt < 1 || Ns < 1 || points.size() != static_cast<std::size_t>((Nt + 1) * (Ns + 1)))
    throw Error(ErrorCode::GridMismatch, "point surface needs (Nt+1)(Ns+1) samples");
  return std::make_shared<PointSurface>(Nt, Ns, std::move(points));
}

SurfaceMapPtr restricted_t(SurfaceMapPtr surface, double t0, double t1) {
  return std::make_shared<RestrictedT>(std::move(surface), t0, t1);
}

PathMapPtr row_path(SurfaceMapPtr surface, double s) { return std::make_shared<RowPath>(std::move(surface), s); }

PathMapPtr column_path(SurfaceMapPtr surface, double t) {
  return std::make_shared<ColumnPath>(std::move(surface), t);
}

TangentMap row_variation(SurfaceMapPtr surface, double s) {
  return [surface, s](double t) { return surface->ds(t, s); };
}

Vec2 Reparametrization::operator()(double t, double s) const {
  const double phi = t + a * s * t * (1 - t);
  double psi = s + b * s * (1 - s);
  if (mode == Mode::II) psi = s + b * s * (1 - s) * (1 + t * (1 - t));
  return {phi, psi};
}

Eigen::Matrix2d Reparametrization::jacobian(double t, double s) const {
  Eigen::Matrix2d J;
  J(0, 0) = 1 + a * s * (1 - 2 * t);
  J(0, 1) = a * t * (1 - t);
  if (mode == Mode::I) {
    J(1, 0) = 0.0;
    J(1, 1) = 1 + b * (1 - 2 * s);
  } else {
    J(1, 0) = b * s * (1 - s) * (1 - 2 * t);
    J(1, 1) = 1 + b * (1 - 2 * s) * (1 + t * (1 - t));
  }
  return J;
}

void Reparametrization::validate(int n) const {
  if (!std::isfinite(a) || !std::isfinite(b)) throw Error(ErrorCode::NotDiffeo, "non-finite parameters");
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const double t = static_cast<double>(i) / n, s = static_cast<double>(j) / n;
      const Eigen::Matrix2d J = jacobian(t, s);
      if (J(0, 0) <= 0 || J(1, 1) <= 0 || J.determinant() <= 0)
        throw Error(ErrorCode::NotDiffeo, "Jacobian not positive at (" + std::to_string(t) + ", " +
                                              std::to_string(s) + ") for a=" + std::to_string(a) +
                                              ", b=" + std::to_string(b));
    }
}

Vec2 Reparametrization::inverse(double T, double S) const {
  Vec2 p(T, S);
  for (int it = 0; it < 50; ++it) {
    const Vec2 r = (*this)(p(0), p(1)) - Vec2(T, S);
    if (r.norm() < 1e-15) break;
    p -= jacobian(p(0), p(1)).inverse() * r;
  }
  return p;
}

SurfaceMapPtr reparametrized(SurfaceMapPtr surface, const Reparametrization& phi) {
  return std::make_shared<ReparametrizedSurface>(std::move(surface), phi);
}

SurfaceGrid make_surface_grid(SurfaceMapPtr surface, int Nt, int Ns) {
  require_even(Nt, "N_t");
  require_even(Ns, "N_s");
  SurfaceGrid g;
  g.map = std::move(surface);
  g.Nt = Nt;
  g.Ns = Ns;
  g.t.resize(Nt + 1);
  g.s.resize(Ns + 1);
  for (int i = 0; i <= Nt; ++i) g.t[i] = (i == Nt) ? 1.0 : static_cast<double>(i) / Nt;
  for (int j = 0; j <= Ns; ++j) g.s[j] = (j == Ns) ? 1.0 : static_cast<double>(j) / Ns;
  const std::size_t n = static_cast<std::size_t>((Nt + 1) * (Ns + 1));
  g.points.resize(n);
  g.dt.resize(n);
  g.ds.resize(n);
  for (int j = 0; j <= Ns; ++j)
    for (int i = 0; i <= Nt; ++i) {
      const int k = g.index(i, j);
      g.points[k] = g.map->point(g.t[i], g.s[j]);
      g.dt[k] = g.map->dt(g.t[i], g.s[j]);
      g.ds[k] = g.map->ds(g.t[i], g.s[j]);
    }
  return g;
}

SampledPath SurfaceGrid::row(int j) const {
  SampledPath p;
  p.t = t;
  p.x.resize(Nt + 1);
  p.dx.resize(Nt + 1);
  for (int i = 0; i <= Nt; ++i) {
    p.x[i] = points[index(i, j)];
    p.dx[i] = dt[index(i, j)];
  }
  p.x_mid.resize(Nt);
  p.dx_mid.resize(Nt);
  for (int i = 0; i < Nt; ++i) {
    const double tm = (i + 0.5) / Nt;
    p.x_mid[i] = map->point(tm, s[j]);
    p.dx_mid[i] = map->dt(tm, s[j]);
  }
  return p;
}

TangentField SurfaceGrid::row_variation(int j) const {
  TangentField f;
  f.v.resize(Nt + 1);
  for (int i = 0; i <= Nt; ++i) f.v[i] = ds[index(i, j)];
  f.v_mid.resize(Nt);
  for (int i = 0; i < Nt; ++i) f.v_mid[i] = map->ds((i + 0.5) / Nt, s[j]);
  return f;
}

SampledPath SurfaceGrid::column(int i) const {
  SampledPath p;
  p.t = s;
  p.x.resize(Ns + 1);
  p.dx.resize(Ns + 1);
  for (int j = 0; j <= Ns; ++j) {
    p.x[j] = points[index(i, j)];
    p.dx[j] = ds[index(i, j)];
  }
  p.x_mid.resize(Ns);
  p.dx_mid.resize(Ns);
  for (int j = 0; j < Ns; ++j) {
    const double sm = (j + 0.5) / Ns;
    p.x_mid[j] = map->point(t[i], sm);
    p.dx_mid[j] = map->ds(t[i], sm);
  }
  return p;
}

double partials_fd_residual(const SurfaceGrid& g) {
  double r = 0.0;
  for (int j = 0; j <= g.Ns; ++j)
    for (int i = 0; i <= g.Nt; ++i) {
      if (i > 0 && i < g.Nt) {
        const Vec2 fd = (g.points[g.index(i + 1, j)] - g.points[g.index(i - 1, j)]) * (0.5 * g.Nt);
        r = std::max(r, (fd - g.dt[g.index(i, j)]).norm());
      }
      if (j > 0 && j < g.Ns) {
        const Vec2 fd = (g.points[g.index(i, j + 1)] - g.points[g.index(i, j - 1)]) * (0.5 * g.Ns);
        r = std::max(r, (fd - g.ds[g.index(i, j)]).norm());
      }
    }
  return r;
}

}  // namespace pathgauge
