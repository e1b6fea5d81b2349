#include <cmath>
#include <limits>

#include <doctest.h>

#include "pathgauge/fields.hpp"

using namespace pathgauge;

namespace {

double dist(const Mat& x, const Mat& y) { return norm(Mat(x - y)); }

Vec2 random_point(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  return {u(rng), u(rng)};
}

}  // namespace

TEST_CASE("landau connection has constant curvature b K") {
  const Group su2(GroupKind::SU2);
  const Mat K = su2.basis(1);
  const ConnectionField A = ConnectionField::landau(su2, 0.6, K);
  Rng rng(1);
  for (int k = 0; k < 20; ++k) CHECK(dist(curvature(A, random_point(rng)), Mat(0.6 * K)) < 1e-14);

  const Group u1(GroupKind::U1);
  const ConnectionField B = ConnectionField::landau(u1, -1.3);
  CHECK(std::abs(curvature(B, Vec2(0.2, 0.9))(0, 0) - cplx(0.0, -1.3)) < 1e-15);
}

TEST_CASE("constant connection curvature is the commutator") {
  const Group su2(GroupKind::SU2);
  const Mat a1 = 0.5 * su2.basis(0), a2 = 0.4 * su2.basis(1);
  const ConnectionField A = ConnectionField::constant(su2, a1, a2);
  CHECK(dist(curvature(A, Vec2(0.3, -0.1)), Mat(0.2 * su2.basis(2))) < 1e-15);
  CHECK(dist(A.along(Vec2(0, 0), Vec2(2.0, -1.0)), Mat(2.0 * a1 - a2)) < 1e-15);

  const Group u1(GroupKind::U1);
  const ConnectionField U = ConnectionField::constant(u1, u1.basis(0), 2.0 * u1.basis(0));
  CHECK(norm(curvature(U, Vec2(1, 1))) < 1e-15);
}

TEST_CASE("analytic derivative matches central differences") {
  const Group su2(GroupKind::SU2);
  const ConnectionField A = ConnectionField::random_poly2(su2, 0.7, 99);
  const Vec2 x(0.4, -0.3);
  const double h = 1e-5;
  const auto d = A.derivative(x);
  for (int mu = 0; mu < 2; ++mu) {
    Vec2 e = Vec2::Zero();
    e(mu) = h;
    const Components plus = A(x + e), minus = A(x - e);
    for (int nu = 0; nu < 2; ++nu) CHECK(dist(d[mu][nu], Mat((plus[nu] - minus[nu]) / (2 * h))) < 1e-9);
  }
}

TEST_CASE("random poly2 connections are reproducible and algebra valued") {
  const Group so3(GroupKind::SO3);
  const ConnectionField A = ConnectionField::random_poly2(so3, 0.5, 7);
  const ConnectionField B = ConnectionField::random_poly2(so3, 0.5, 7);
  const ConnectionField C = ConnectionField::random_poly2(so3, 0.5, 8);
  const Vec2 x(0.1, 0.8);
  CHECK(dist(A(x)[0], B(x)[0]) == 0.0);
  CHECK(dist(A(x)[1], C(x)[1]) > 1e-6);
  CHECK(so3.algebra_residual(A(x)[0]) < 1e-14);
  CHECK(so3.algebra_residual(curvature(A, x)) < 1e-13);
}

TEST_CASE("constant gauge rotation conjugates the curvature") {
  const Group su2(GroupKind::SU2);
  const ConnectionField A = ConnectionField::random_poly2(su2, 0.6, 3);
  Rng rng(4);
  const Mat g = random_element(su2, rng, 1.0);
  const ConnectionField Ag = A.conjugated(g);
  for (int k = 0; k < 10; ++k) {
    const Vec2 x = random_point(rng);
    CHECK(dist(curvature(Ag, x), Mat(g * curvature(A, x) * su2.inverse(g))) < 1e-13);
  }
}

TEST_CASE("flatting 2-form cancels the curvature") {
  const CrossedModulePtr cm = make_crossed_module("su2-conj");
  const ConnectionField Abar = ConnectionField::random_poly2(cm->G(), 0.5, 21);
  const TwoFormField B = make_flatting_B(Abar, *cm);
  Rng rng(2);
  for (int k = 0; k < 20; ++k) CHECK(norm(fake_curvature(Abar, B, *cm, random_point(rng))) < 1e-14);

  const TwoFormField shifted = B + TwoFormField::constant(cm->H(), 0.1 * cm->H().basis(0));
  CHECK(dist(fake_curvature(Abar, shifted, *cm, Vec2(0.2, 0.2)), Mat(0.1 * cm->H().basis(0))) < 1e-14);

  const CrossedModulePtr cover = make_crossed_module("su2-so3");
  try {
    make_flatting_B(ConnectionField::zero(cover->G()), *cover);
    FAIL("expected TauNotInvertible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TauNotInvertible);
  }
}

TEST_CASE("two-form pairing and action") {
  const CrossedModulePtr cm = make_crossed_module("su2-conj");
  const Group H = cm->H();
  const TwoFormField B = TwoFormField::constant(H, H.basis(2));
  const Vec2 u(1.0, 2.0), v(-0.5, 3.0);
  CHECK(dist(B.pair(Vec2::Zero(), u, v), Mat(wedge(u, v) * H.basis(2))) < 1e-15);
  CHECK(wedge(u, v) == doctest::Approx(4.0));
  CHECK(dist(B.pair(Vec2::Zero(), u, v), Mat(-B.pair(Vec2::Zero(), v, u))) < 1e-15);

  const Mat g = cm->G().exp(0.8 * cm->G().basis(0));
  const TwoFormField acted = B.acted(cm, g);
  CHECK(dist(acted(Vec2(0.3, 0.4)), cm->alpha(g, H.basis(2))) < 1e-15);
}

TEST_CASE("poly2 two-form evaluates its monomials") {
  const Group u1(GroupKind::U1);
  std::array<Mat, kMonomials> coeffs;
  for (int k = 0; k < kMonomials; ++k) coeffs[k] = (k + 1.0) * u1.basis(0);
  const TwoFormField B = TwoFormField::poly2(u1, coeffs);
  const Vec2 x(0.5, -2.0);
  // 1 + 2 x1 + 3 x2 + 4 x1^2 + 5 x1 x2 + 6 x2^2
  const double expected = 1 + 2 * 0.5 + 3 * -2.0 + 4 * 0.25 + 5 * 0.5 * -2.0 + 6 * 4.0;
  CHECK(std::abs(B(x)(0, 0) - cplx(0, expected)) < 1e-13);
}

TEST_CASE("field errors") {
  const Group su2(GroupKind::SU2), u1(GroupKind::U1);
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::NonFinite;
  };
  CHECK(code_of([&] { (void)(ConnectionField::zero(su2) + ConnectionField::zero(u1)); }) == ErrorCode::TagMismatch);
  CHECK(code_of([&] { (void)(TwoFormField::zero(su2) + TwoFormField::zero(u1)); }) == ErrorCode::TagMismatch);
  const TwoFormField bad(u1, "custom", [](const Vec2&) {
    Mat m(1, 1);
    m(0, 0) = cplx(0, std::numeric_limits<double>::quiet_NaN());
    return m;
  });
  CHECK(code_of([&] { bad(Vec2::Zero()); }) == ErrorCode::FieldEvaluation);
}
