#include "pathgauge/fields.hpp"

namespace pathgauge {

std::array<double, kMonomials> monomials(const Vec2& x) {
  return {1.0, x(0), x(1), x(0) * x(0), x(0) * x(1), x(1) * x(1)};
}

namespace {

// partial_mu of each monomial.
std::array<double, kMonomials> monomial_derivative(const Vec2& x, int mu) {
  if (mu == 0) return {0.0, 1.0, 0.0, 2.0 * x(0), x(1), 0.0};
  return {0.0, 0.0, 1.0, 0.0, x(0), 2.0 * x(1)};
}

std::array<Components, kMonomials> zero_coeffs(const Group& G) {
  std::array<Components, kMonomials> c;
  for (auto& comp : c) comp = {G.zero_algebra(), G.zero_algebra()};
  return c;
}

void check_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorCode::FieldEvaluation, std::string("non-finite ") + what);
}

}  // namespace

ConnectionField::ConnectionField(Group group, std::string family, std::array<Components, kMonomials> coeffs)
    : group_(group), family_(std::move(family)), coeffs_(std::move(coeffs)) {
  for (const auto& comp : coeffs_)
    for (const Mat& m : comp)
      if (m.rows() != group_.dim() || m.cols() != group_.dim())
        throw Error(ErrorCode::TagMismatch, "connection coefficient shape does not match " + group_.name());
}

ConnectionField ConnectionField::zero(const Group& G) { return {G, "zero", zero_coeffs(G)}; }

ConnectionField ConnectionField::constant(const Group& G, const Mat& a1, const Mat& a2) {
  auto c = zero_coeffs(G);
  c[0] = {a1, a2};
  return {G, "constant", c};
}

ConnectionField ConnectionField::landau(const Group& G, double b, const Mat& generator) {
  auto c = zero_coeffs(G);
  c[1][1] = b * generator;
  return {G, "landau", c};
}

ConnectionField ConnectionField::random_poly2(const Group& G, double scale, std::uint64_t seed) {
  Rng rng(seed);
  auto c = zero_coeffs(G);
  for (auto& comp : c)
    for (Mat& m : comp) m = random_algebra(G, rng, scale);
  return {G, "poly2", c};
}

Components ConnectionField::operator()(const Vec2& x) const {
  const auto mono = monomials(x);
  Components out{group_.zero_algebra(), group_.zero_algebra()};
  for (int k = 0; k < kMonomials; ++k) {
    if (mono[k] == 0.0) continue;
    out[0] += mono[k] * coeffs_[k][0];
    out[1] += mono[k] * coeffs_[k][1];
  }
  check_finite(out[0], "connection value");
  check_finite(out[1], "connection value");
  return out;
}

Mat ConnectionField::along(const Vec2& x, const Vec2& u) const {
  const Components a = (*this)(x);
  return u(0) * a[0] + u(1) * a[1];
}

std::array<Components, 2> ConnectionField::derivative(const Vec2& x) const {
  std::array<Components, 2> d;
  for (int mu = 0; mu < 2; ++mu) {
    const auto dm = monomial_derivative(x, mu);
    d[mu] = {group_.zero_algebra(), group_.zero_algebra()};
    for (int k = 1; k < kMonomials; ++k) {
      if (dm[k] == 0.0) continue;
      d[mu][0] += dm[k] * coeffs_[k][0];
      d[mu][1] += dm[k] * coeffs_[k][1];
    }
  }
  return d;
}

ConnectionField ConnectionField::conjugated(const Mat& g) const {
  const Mat gi = group_.inverse(g);
  auto c = coeffs_;
  for (auto& comp : c)
    for (Mat& m : comp) m = ad(g, gi, m);
  return {group_, family_, c};
}

ConnectionField ConnectionField::operator+(const ConnectionField& other) const {
  if (group_ != other.group_) throw Error(ErrorCode::TagMismatch, "sum of connections on different groups");
  auto c = coeffs_;
  for (int k = 0; k < kMonomials; ++k)
    for (int mu = 0; mu < 2; ++mu) c[k][mu] += other.coeffs_[k][mu];
  return {group_, family_ + "+" + other.family_, c};
}

TwoFormField::TwoFormField(Group group, std::string family, Evaluator eval)
    : group_(group), family_(std::move(family)), eval_(std::move(eval)) {}

TwoFormField TwoFormField::zero(const Group& H) {
  const Mat z = H.zero_algebra();
  return {H, "zero", [z](const Vec2&) { return z; }};
}

TwoFormField TwoFormField::constant(const Group& H, const Mat& value) {
  return {H, "constant", [value](const Vec2&) { return value; }};
}

TwoFormField TwoFormField::poly2(const Group& H, const std::array<Mat, kMonomials>& coeffs) {
  const Mat z = H.zero_algebra();
  return {H, "poly2", [coeffs, z](const Vec2& x) {
            const auto mono = monomials(x);
            Mat out = z;
            for (int k = 0; k < kMonomials; ++k) out += mono[k] * coeffs[k];
            return out;
          }};
}

Mat TwoFormField::operator()(const Vec2& x) const {
  if (!eval_) return group_.zero_algebra();
  Mat b = eval_(x);
  check_finite(b, "2-form value");
  return b;
}

Mat TwoFormField::pair(const Vec2& x, const Vec2& u, const Vec2& v) const { return wedge(u, v) * (*this)(x); }

TwoFormField TwoFormField::operator+(const TwoFormField& other) const {
  if (group_ != other.group_) throw Error(ErrorCode::TagMismatch, "sum of 2-forms on different groups");
  auto lhs = *this;
  auto rhs = other;
  return {group_, family_ + "+" + other.family_, [lhs, rhs](const Vec2& x) { return Mat(lhs(x) + rhs(x)); }};
}

TwoFormField TwoFormField::acted(const CrossedModulePtr& cm, const Mat& g) const {
  auto base = *this;
  return {group_, family_, [base, cm, g](const Vec2& x) { return cm->alpha_alg(g, base(x)); }};
}

Mat curvature(const ConnectionField& A, const Vec2& x) {
  const Components a = A(x);
  const auto d = A.derivative(x);
  return d[0][1] - d[1][0] + commutator(a[0], a[1]);
}

Mat fake_curvature(const ConnectionField& Abar, const TwoFormField& B, const CrossedModule& cm, const Vec2& x) {
  return curvature(Abar, x) + cm.tau_alg(B(x));
}

TwoFormField make_flatting_B(const ConnectionField& Abar, const CrossedModule& cm) {
  if (!cm.tau_is_identity())
    throw Error(ErrorCode::TauNotInvertible, "flatting 2-form needs tau = id, module " + cm.name());
  if (cm.H() != Abar.group()) throw Error(ErrorCode::TagMismatch, "connection group differs from H");
  return {cm.H(), "flatting", [Abar](const Vec2& x) { return Mat(-curvature(Abar, x)); }};
}

}  // namespace pathgauge
