#include "pathgauge/liecore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace pathgauge {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::TagMismatch: return "TagMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::LogDomain: return "LogDomain";
    case ErrorCode::TauNotInvertible: return "TauNotInvertible";
    case ErrorCode::FieldEvaluation: return "FieldEvaluation";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::VariationTooCoarse: return "VariationTooCoarse";
    case ErrorCode::NotDiffeo: return "NotDiffeo";
    case ErrorCode::ConditionViolated: return "ConditionViolated";
    case ErrorCode::NotComposable: return "NotComposable";
    case ErrorCode::NotQuasiFlat: return "NotQuasiFlat";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::UnknownTask: return "UnknownTask";
    case ErrorCode::UnknownFamily: return "UnknownFamily";
  }
  return "Unknown";
}

double norm(const Mat& m) { return m.norm(); }

double operator_norm(const Mat& m) {
  Eigen::MatrixXcd d = m;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(d);
  return svd.singularValues()(0);
}

bool all_finite(const Mat& m) { return m.allFinite(); }

namespace {

constexpr cplx I1{0.0, 1.0};

int kind_dim(GroupKind k) {
  switch (k) {
    case GroupKind::U1: return 1;
    case GroupKind::SO2: return 2;
    case GroupKind::SU2: return 2;
    case GroupKind::SO3: return 3;
    case GroupKind::R3: return 4;
  }
  return 0;
}

int kind_algebra_dim(GroupKind k) {
  switch (k) {
    case GroupKind::U1: return 1;
    case GroupKind::SO2: return 1;
    case GroupKind::SU2: return 3;
    case GroupKind::SO3: return 3;
    case GroupKind::R3: return 3;
  }
  return 0;
}

const char* kind_name(GroupKind k) {
  switch (k) {
    case GroupKind::U1: return "U1";
    case GroupKind::SO2: return "SO2";
    case GroupKind::SU2: return "SU2";
    case GroupKind::SO3: return "SO3";
    case GroupKind::R3: return "R3";
  }
  return "?";
}

Mat pauli(int k) {
  Mat s(2, 2);
  switch (k) {
    case 0: s << 0.0, 1.0, 1.0, 0.0; break;
    case 1: s << 0.0, -I1, I1, 0.0; break;
    default: s << 1.0, 0.0, 0.0, -1.0; break;
  }
  return s;
}

Mat kind_basis(GroupKind kind, int k) {
  const int n = kind_dim(kind);
  Mat b = Mat::Zero(n, n);
  switch (kind) {
    case GroupKind::U1: b(0, 0) = I1; break;
    case GroupKind::SO2: b(0, 1) = -1.0; b(1, 0) = 1.0; break;
    case GroupKind::SU2: b = cplx(0.0, -0.5) * pauli(k); break;
    case GroupKind::SO3: {
      const int i = (k + 1) % 3, j = (k + 2) % 3;
      b(j, i) = 1.0;
      b(i, j) = -1.0;
      break;
    }
    case GroupKind::R3: b(k, 3) = 1.0; break;
  }
  return b;
}

double real_sq(const Mat& m) { return m.imag().norm(); }

double block_algebra_residual(GroupKind kind, const Mat& X) {
  switch (kind) {
    case GroupKind::U1: return std::abs(X(0, 0).real());
    case GroupKind::SU2: return (X + X.adjoint()).norm() + std::abs(X.trace());
    case GroupKind::SO2:
    case GroupKind::SO3: return (X + X.transpose()).norm() + real_sq(X);
    case GroupKind::R3:
      return X.topLeftCorner(3, 3).norm() + X.row(3).norm() + X.col(3).imag().norm();
  }
  return 0.0;
}

double block_group_residual(GroupKind kind, const Mat& g) {
  const int n = static_cast<int>(g.rows());
  const Mat id = Mat::Identity(n, n);
  switch (kind) {
    case GroupKind::U1: return std::abs(std::abs(g(0, 0)) - 1.0);
    case GroupKind::SU2: return (g.adjoint() * g - id).norm() + std::abs(g.determinant() - 1.0);
    case GroupKind::SO2:
    case GroupKind::SO3:
      return (g.adjoint() * g - id).norm() + std::abs(g.determinant() - 1.0) + real_sq(g);
    case GroupKind::R3: {
      Mat bottom = Mat::Zero(1, 4);
      bottom(0, 3) = 1.0;
      return (g.topLeftCorner(3, 3) - Mat::Identity(3, 3)).norm() + (g.row(3) - bottom).norm() +
             g.col(3).imag().norm();
    }
  }
  return 0.0;
}

Mat generic_exp(const Mat& X) {
  Eigen::MatrixXcd d = X;
  Eigen::MatrixXcd e = d.exp();
  return Mat(e);
}

Mat generic_log(const Mat& g) {
  Eigen::MatrixXcd d = g;
  Eigen::MatrixXcd l = d.log();
  return Mat(l);
}

// sinh(q)/q and cosh(q) for complex q, accurate near zero.
void sinhc_cosh(cplx q, cplx& sinhc, cplx& cosh_q) {
  if (std::abs(q) < 1e-4) {
    const cplx q2 = q * q;
    sinhc = 1.0 + q2 / 6.0 + q2 * q2 / 120.0;
    cosh_q = 1.0 + q2 / 2.0 + q2 * q2 / 24.0;
  } else {
    sinhc = std::sinh(q) / q;
    cosh_q = std::cosh(q);
  }
}

Mat exp_2x2(const Mat& X) {
  const cplx half_tr = 0.5 * X.trace();
  Mat Y = X;
  Y(0, 0) -= half_tr;
  Y(1, 1) -= half_tr;
  const cplx q = std::sqrt(-Y.determinant());
  cplx sc, ch;
  sinhc_cosh(q, sc, ch);
  Mat r = sc * Y;
  r(0, 0) += ch;
  r(1, 1) += ch;
  return std::exp(half_tr) * r;
}

Mat exp_so3(const Mat& X) {
  const double theta2 = 0.5 * X.squaredNorm();
  const double theta = std::sqrt(theta2);
  double a, b;
  if (theta < 1e-4) {
    a = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    b = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  Mat r = Mat::Identity(3, 3) + a * X + b * (X * X);
  return r;
}

Mat block_exp(GroupKind kind, const Mat& X) {
  switch (kind) {
    case GroupKind::U1: {
      Mat r(1, 1);
      r(0, 0) = std::exp(X(0, 0));
      return r;
    }
    case GroupKind::SO2:
    case GroupKind::SU2: return exp_2x2(X);
    case GroupKind::SO3:
      if (block_algebra_residual(kind, X) < 1e-12 * (1.0 + X.norm())) return exp_so3(X);
      return generic_exp(X);
    case GroupKind::R3:
      if (block_algebra_residual(kind, X) < 1e-12 * (1.0 + X.norm()))
        return Mat(Mat::Identity(4, 4) + X);
      return generic_exp(X);
  }
  return generic_exp(X);
}

double theta_over_sin(double theta) {
  if (theta < 1e-4) return 1.0 + theta * theta / 6.0;
  return theta / std::sin(theta);
}

Mat block_log(GroupKind kind, const Mat& g) {
  const bool in_group = block_group_residual(kind, g) < 1e-10;
  switch (kind) {
    case GroupKind::U1: {
      Mat r(1, 1);
      r(0, 0) = std::log(g(0, 0));
      return r;
    }
    case GroupKind::SO2:
      if (in_group) {
        const double theta = std::atan2(g(1, 0).real(), g(0, 0).real());
        return theta * kind_basis(kind, 0);
      }
      return generic_log(g);
    case GroupKind::SU2:
      if (in_group) {
        const double c = std::clamp(0.5 * g.trace().real(), -1.0, 1.0);
        return 0.5 * theta_over_sin(std::acos(c)) * (g - g.adjoint());
      }
      return generic_log(g);
    case GroupKind::SO3:
      if (in_group) {
        const double c = std::clamp(0.5 * (g.trace().real() - 1.0), -1.0, 1.0);
        return 0.5 * theta_over_sin(std::acos(c)) * (g - g.transpose());
      }
      return generic_log(g);
    case GroupKind::R3:
      if (in_group) return Mat(g - Mat::Identity(4, 4));
      return generic_log(g);
  }
  return generic_log(g);
}

Mat block_inverse(GroupKind kind, const Mat& g) {
  switch (kind) {
    case GroupKind::U1: {
      Mat r(1, 1);
      r(0, 0) = 1.0 / g(0, 0);
      return r;
    }
    case GroupKind::SO2:
    case GroupKind::SU2:
    case GroupKind::SO3: return g.adjoint();
    case GroupKind::R3: return Mat(2.0 * Mat::Identity(4, 4) - g);
  }
  return g.inverse();
}

}  // namespace

Group::Group(GroupKind kind) : n_(1) { kinds_[0] = kind; }

Group Group::product(std::initializer_list<GroupKind> kinds) {
  if (kinds.size() == 0 || kinds.size() > 3) throw Error(ErrorCode::UnknownFamily, "product of 1..3 factors");
  Group g;
  g.n_ = 0;
  int dim = 0;
  for (GroupKind k : kinds) {
    g.kinds_[g.n_++] = k;
    dim += kind_dim(k);
  }
  if (dim > 4) throw Error(ErrorCode::UnknownFamily, "product exceeds 4x4 matrices");
  return g;
}

Group Group::parse(std::string_view name) {
  std::vector<GroupKind> kinds;
  std::size_t start = 0;
  while (start <= name.size()) {
    const std::size_t end = std::min(name.find('x', start), name.size());
    const std::string_view part = name.substr(start, end - start);
    if (part == "U1") kinds.push_back(GroupKind::U1);
    else if (part == "SO2") kinds.push_back(GroupKind::SO2);
    else if (part == "SU2") kinds.push_back(GroupKind::SU2);
    else if (part == "SO3") kinds.push_back(GroupKind::SO3);
    else if (part == "R3") kinds.push_back(GroupKind::R3);
    else throw Error(ErrorCode::UnknownFamily, "group '" + std::string(name) + "'");
    start = end + 1;
  }
  Group g;
  g.n_ = 0;
  int dim = 0;
  for (GroupKind k : kinds) {
    if (g.n_ == 3) throw Error(ErrorCode::UnknownFamily, "too many factors in '" + std::string(name) + "'");
    g.kinds_[g.n_++] = k;
    dim += kind_dim(k);
  }
  if (dim > 4) throw Error(ErrorCode::UnknownFamily, "group '" + std::string(name) + "' exceeds 4x4");
  return g;
}

std::string Group::name() const {
  std::string s;
  for (int k = 0; k < n_; ++k) {
    if (k) s += 'x';
    s += kind_name(kinds_[k]);
  }
  return s;
}

int Group::dim() const {
  int d = 0;
  for (int k = 0; k < n_; ++k) d += kind_dim(kinds_[k]);
  return d;
}

int Group::algebra_dim() const {
  int d = 0;
  for (int k = 0; k < n_; ++k) d += kind_algebra_dim(kinds_[k]);
  return d;
}

bool Group::is_abelian() const {
  for (int k = 0; k < n_; ++k)
    if (kinds_[k] == GroupKind::SU2 || kinds_[k] == GroupKind::SO3) return false;
  return true;
}

bool Group::operator==(const Group& other) const {
  if (n_ != other.n_) return false;
  for (int k = 0; k < n_; ++k)
    if (kinds_[k] != other.kinds_[k]) return false;
  return true;
}

Mat Group::identity() const { return Mat::Identity(dim(), dim()); }

Mat Group::zero_algebra() const { return Mat::Zero(dim(), dim()); }

Mat Group::basis(int k) const {
  Mat b = zero_algebra();
  int off = 0;
  for (int f = 0; f < n_; ++f) {
    const int ad = kind_algebra_dim(kinds_[f]);
    const int n = kind_dim(kinds_[f]);
    if (k < ad) {
      b.block(off, off, n, n) = kind_basis(kinds_[f], k);
      return b;
    }
    k -= ad;
    off += n;
  }
  throw Error(ErrorCode::IndexOutOfRange, "algebra basis index");
}

Mat Group::from_coeffs(std::span<const double> coeffs) const {
  if (static_cast<int>(coeffs.size()) != algebra_dim())
    throw Error(ErrorCode::TagMismatch, "expected " + std::to_string(algebra_dim()) + " algebra coefficients for " +
                                            name() + ", got " + std::to_string(coeffs.size()));
  Mat X = zero_algebra();
  for (int k = 0; k < algebra_dim(); ++k) X += coeffs[k] * basis(k);
  return X;
}

std::vector<double> Group::to_coeffs(const Mat& X) const {
  std::vector<double> c(algebra_dim());
  for (int k = 0; k < algebra_dim(); ++k) {
    const Mat b = basis(k);
    c[k] = (b.adjoint() * X).trace().real() / b.squaredNorm();
  }
  return c;
}

namespace {

template <class F>
Mat blockwise(const Group& G, const Mat& M, F&& f) {
  Mat r = Mat::Zero(G.dim(), G.dim());
  int off = 0;
  for (int k = 0; k < G.factor_count(); ++k) {
    const int n = kind_dim(G.factor(k));
    r.block(off, off, n, n) = f(G.factor(k), Mat(M.block(off, off, n, n)));
    off += n;
  }
  return r;
}

double off_block_norm(const Group& G, const Mat& M) {
  Mat r = M;
  int off = 0;
  for (int k = 0; k < G.factor_count(); ++k) {
    const int n = kind_dim(G.factor(k));
    r.block(off, off, n, n).setZero();
    off += n;
  }
  return r.norm();
}

void require_shape(const Group& G, const Mat& M) {
  if (M.rows() != G.dim() || M.cols() != G.dim())
    throw Error(ErrorCode::TagMismatch, "matrix shape does not match group " + G.name());
}

}  // namespace

Mat Group::exp(const Mat& X) const {
  require_shape(*this, X);
  if (!X.allFinite()) throw Error(ErrorCode::NonFinite, "exp argument");
  if (n_ == 1) return block_exp(kinds_[0], X);
  return blockwise(*this, X, [](GroupKind k, const Mat& b) { return block_exp(k, b); });
}

Mat Group::log(const Mat& g) const {
  require_shape(*this, g);
  if (!g.allFinite()) throw Error(ErrorCode::NonFinite, "log argument");
  const double dist = operator_norm(g - identity());
  if (dist >= 1.9) throw Error(ErrorCode::LogDomain, "|g - I| = " + std::to_string(dist) + " >= 1.9");
  if (n_ == 1) return block_log(kinds_[0], g);
  return blockwise(*this, g, [](GroupKind k, const Mat& b) { return block_log(k, b); });
}

Mat Group::inverse(const Mat& g) const {
  if (n_ == 1) return block_inverse(kinds_[0], g);
  return blockwise(*this, g, [](GroupKind k, const Mat& b) { return block_inverse(k, b); });
}

double Group::group_residual(const Mat& g) const {
  if (g.rows() != dim() || g.cols() != dim()) return std::numeric_limits<double>::infinity();
  double r = off_block_norm(*this, g);
  int off = 0;
  for (int k = 0; k < n_; ++k) {
    const int n = kind_dim(kinds_[k]);
    r += block_group_residual(kinds_[k], Mat(g.block(off, off, n, n)));
    off += n;
  }
  return r;
}

double Group::algebra_residual(const Mat& X) const {
  if (X.rows() != dim() || X.cols() != dim()) return std::numeric_limits<double>::infinity();
  double r = off_block_norm(*this, X);
  int off = 0;
  for (int k = 0; k < n_; ++k) {
    const int n = kind_dim(kinds_[k]);
    r += block_algebra_residual(kinds_[k], Mat(X.block(off, off, n, n)));
    off += n;
  }
  return r;
}

namespace {

void require_same(const Group& a, const Group& b, const char* what) {
  if (a != b) throw Error(ErrorCode::TagMismatch, std::string(what) + ": " + a.name() + " vs " + b.name());
}

}  // namespace

GroupElement exp(const AlgebraElement& X) { return {X.group, X.group.exp(X.matrix)}; }

AlgebraElement log(const GroupElement& g) { return {g.group, g.group.log(g.matrix)}; }

AlgebraElement ad_action(const GroupElement& g, const AlgebraElement& X) {
  require_same(g.group, X.group, "ad_action");
  return {X.group, ad(g.matrix, g.group.inverse(g.matrix), X.matrix)};
}

AlgebraElement bracket(const AlgebraElement& X, const AlgebraElement& Y) {
  require_same(X.group, Y.group, "bracket");
  return {X.group, commutator(X.matrix, Y.matrix)};
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  require_same(a.group, b.group, "product");
  return {a.group, a.matrix * b.matrix};
}

GroupElement inverse(const GroupElement& g) { return {g.group, g.group.inverse(g.matrix)}; }

Mat random_algebra(const Group& G, Rng& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> c(G.algebra_dim());
  for (double& x : c) x = u(rng);
  return G.from_coeffs(c);
}

Mat random_element(const Group& G, Rng& rng, double scale) { return G.exp(random_algebra(G, rng, scale)); }

Mat su2_to_so3(const Mat& h) {
  Mat R(3, 3);
  const Mat hd = h.adjoint();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) R(i, j) = 0.5 * (pauli(i) * h * pauli(j) * hd).trace().real();
  return R;
}

Mat su2_to_so3_algebra(const Mat& X) {
  Mat R(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) R(i, j) = 0.5 * (pauli(i) * commutator(X, pauli(j))).trace().real();
  return R;
}

Mat so3_to_su2(const Mat& Rc) {
  const Eigen::Matrix3d R = Rc.real();
  const double tr = R.trace();
  double w, x, y, z;
  // Shepperd's choice of the largest pivot.
  if (tr >= R(0, 0) && tr >= R(1, 1) && tr >= R(2, 2)) {
    w = 0.5 * std::sqrt(std::max(0.0, 1.0 + tr));
    x = (R(2, 1) - R(1, 2)) / (4.0 * w);
    y = (R(0, 2) - R(2, 0)) / (4.0 * w);
    z = (R(1, 0) - R(0, 1)) / (4.0 * w);
  } else if (R(0, 0) >= R(1, 1) && R(0, 0) >= R(2, 2)) {
    x = 0.5 * std::sqrt(std::max(0.0, 1.0 + R(0, 0) - R(1, 1) - R(2, 2)));
    w = (R(2, 1) - R(1, 2)) / (4.0 * x);
    y = (R(0, 1) + R(1, 0)) / (4.0 * x);
    z = (R(0, 2) + R(2, 0)) / (4.0 * x);
  } else if (R(1, 1) >= R(2, 2)) {
    y = 0.5 * std::sqrt(std::max(0.0, 1.0 - R(0, 0) + R(1, 1) - R(2, 2)));
    w = (R(0, 2) - R(2, 0)) / (4.0 * y);
    x = (R(0, 1) + R(1, 0)) / (4.0 * y);
    z = (R(1, 2) + R(2, 1)) / (4.0 * y);
  } else {
    z = 0.5 * std::sqrt(std::max(0.0, 1.0 - R(0, 0) - R(1, 1) + R(2, 2)));
    w = (R(1, 0) - R(0, 1)) / (4.0 * z);
    x = (R(0, 2) + R(2, 0)) / (4.0 * z);
    y = (R(1, 2) + R(2, 1)) / (4.0 * z);
  }
  if (w < 0.0) {
    w = -w;
    x = -x;
    y = -y;
    z = -z;
  }
  Mat h(2, 2);
  h << cplx(w, -z), cplx(-y, -x), cplx(y, -x), cplx(w, z);
  return h;
}

Mat CrossedModule::tau_section(const Mat&) const {
  throw Error(ErrorCode::TauNotInvertible, "no section of tau for " + name());
}

namespace {

class ConjugationModule final : public CrossedModule {
 public:
  ConjugationModule(Group g, std::string name) : g_(g), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  Group G() const override { return g_; }
  Group H() const override { return g_; }
  Mat tau(const Mat& h) const override { return h; }
  Mat tau_alg(const Mat& K) const override { return K; }
  Mat alpha(const Mat& g, const Mat& h) const override { return g * h * g_.inverse(g); }
  Mat alpha_alg(const Mat& g, const Mat& K) const override { return g * K * g_.inverse(g); }
  bool tau_is_identity() const override { return true; }
  Mat tau_section(const Mat& g) const override { return g; }

 private:
  Group g_;
  std::string name_;
};

// Abelian H with tau = e and trivial action.
class TrivialActionModule final : public CrossedModule {
 public:
  TrivialActionModule(Group g, Group h, std::string name) : g_(g), h_(h), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  Group G() const override { return g_; }
  Group H() const override { return h_; }
  Mat tau(const Mat&) const override { return g_.identity(); }
  Mat tau_alg(const Mat&) const override { return g_.zero_algebra(); }
  Mat alpha(const Mat&, const Mat& h) const override { return h; }
  Mat alpha_alg(const Mat&, const Mat& K) const override { return K; }
  Mat tau_section(const Mat& g) const override {
    if ((g - g_.identity()).norm() > 1e-9) throw Error(ErrorCode::TauNotInvertible, "element outside image of tau");
    return h_.identity();
  }

 private:
  Group g_, h_;
  std::string name_;
};

// SO(3) acting on the vector group R^3 by rotation, tau = e.
class RotationOnR3Module final : public CrossedModule {
 public:
  std::string name() const override { return "so3-on-r3"; }
  Group G() const override { return Group(GroupKind::SO3); }
  Group H() const override { return Group(GroupKind::R3); }
  Mat tau(const Mat&) const override { return Mat::Identity(3, 3); }
  Mat tau_alg(const Mat&) const override { return Mat::Zero(3, 3); }
  Mat alpha(const Mat& g, const Mat& h) const override { return lift(g) * h * lift(g.adjoint()); }
  Mat alpha_alg(const Mat& g, const Mat& K) const override { return lift(g) * K * lift(g.adjoint()); }
  Mat tau_section(const Mat& g) const override {
    if ((g - Mat::Identity(3, 3)).norm() > 1e-9) throw Error(ErrorCode::TauNotInvertible, "element outside image of tau");
    return Mat::Identity(4, 4);
  }

 private:
  static Mat lift(const Mat& g) {
    Mat d = Mat::Identity(4, 4);
    d.topLeftCorner(3, 3) = g;
    return d;
  }
};

// tau: SU(2) -> SO(3) the double cover, alpha(g) conjugation by a lift of g.
class DoubleCoverModule final : public CrossedModule {
 public:
  std::string name() const override { return "su2-so3"; }
  Group G() const override { return Group(GroupKind::SO3); }
  Group H() const override { return Group(GroupKind::SU2); }
  Mat tau(const Mat& h) const override { return su2_to_so3(h); }
  Mat tau_alg(const Mat& K) const override { return su2_to_so3_algebra(K); }
  Mat alpha(const Mat& g, const Mat& h) const override {
    const Mat l = so3_to_su2(g);
    return l * h * l.adjoint();
  }
  Mat alpha_alg(const Mat& g, const Mat& K) const override {
    const Mat l = so3_to_su2(g);
    return l * K * l.adjoint();
  }
  Mat tau_section(const Mat& g) const override { return so3_to_su2(g); }
};

}  // namespace

CrossedModulePtr make_conjugation_module(const Group& G, std::string name) {
  return std::make_shared<ConjugationModule>(G, std::move(name));
}

CrossedModulePtr make_crossed_module(std::string_view name) {
  if (name == "su2-conj") return make_conjugation_module(Group(GroupKind::SU2), "su2-conj");
  if (name == "u1-conj") return make_conjugation_module(Group(GroupKind::U1), "u1-conj");
  if (name == "u1xsu2-conj")
    return make_conjugation_module(Group::product({GroupKind::U1, GroupKind::SU2}), "u1xsu2-conj");
  if (name == "u1-abelian")
    return std::make_shared<TrivialActionModule>(Group(GroupKind::U1), Group(GroupKind::U1), "u1-abelian");
  if (name == "so3-on-r3") return std::make_shared<RotationOnR3Module>();
  if (name == "su2-so3") return std::make_shared<DoubleCoverModule>();
  throw Error(ErrorCode::UnknownFamily, "crossed module '" + std::string(name) + "'");
}

std::vector<std::string> crossed_module_names() {
  return {"su2-conj", "u1-conj", "u1xsu2-conj", "u1-abelian", "so3-on-r3", "su2-so3"};
}

CrossedModuleReport crossed_module_check(const CrossedModule& cm, int n_samples, std::uint64_t seed) {
  Rng rng(seed);
  const Group G = cm.G(), H = cm.H();
  CrossedModuleReport rep;
  rep.samples = n_samples;
  for (int i = 0; i < n_samples; ++i) {
    const Mat g = random_element(G, rng, 1.5);
    const Mat h = random_element(H, rng, 1.5);
    const Mat hp = random_element(H, rng, 1.5);
    const Mat lhs1 = cm.tau(cm.alpha(g, h));
    const Mat rhs1 = g * cm.tau(h) * G.inverse(g);
    rep.equivariance = std::max(rep.equivariance, norm(lhs1 - rhs1));
    const Mat lhs2 = cm.alpha(cm.tau(h), hp);
    const Mat rhs2 = h * hp * H.inverse(h);
    rep.peiffer = std::max(rep.peiffer, norm(lhs2 - rhs2));
  }
  return rep;
}

}  // namespace pathgauge
