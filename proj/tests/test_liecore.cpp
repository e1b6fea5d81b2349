#include <cmath>
#include <numbers>

#include <doctest.h>

#include "pathgauge/liecore.hpp"

using namespace pathgauge;

namespace {

Mat rotation_z(double angle) {
  Mat R = Mat::Zero(3, 3);
  R(0, 0) = std::cos(angle);
  R(0, 1) = -std::sin(angle);
  R(1, 0) = std::sin(angle);
  R(1, 1) = std::cos(angle);
  R(2, 2) = 1.0;
  return R;
}

double dist(const Mat& x, const Mat& y) { return norm(Mat(x - y)); }

}  // namespace

TEST_CASE("group parsing and dimensions") {
  CHECK(Group::parse("U1").dim() == 1);
  CHECK(Group::parse("SU2").algebra_dim() == 3);
  CHECK(Group::parse("SO3").dim() == 3);
  CHECK(Group::parse("R3").dim() == 4);
  const Group prod = Group::parse("U1xSU2");
  CHECK(prod.dim() == 3);
  CHECK(prod.algebra_dim() == 4);
  CHECK(prod.factor_count() == 2);
  CHECK(prod == Group::product({GroupKind::U1, GroupKind::SU2}));
  CHECK(Group::parse("U1").is_abelian());
  CHECK_FALSE(Group::parse("SU2").is_abelian());

  auto code_of = [](std::string_view name) {
    try {
      Group::parse(name);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::NonFinite;
  };
  CHECK(code_of("SU3") == ErrorCode::UnknownFamily);
  CHECK(code_of("SO3xSO3") == ErrorCode::UnknownFamily);  // 6x6 exceeds the storage bound
}

TEST_CASE("algebra bases satisfy [e1, e2] = e3") {
  for (const Group& G : {Group(GroupKind::SU2), Group(GroupKind::SO3)}) {
    CAPTURE(G.name());
    CHECK(dist(commutator(G.basis(0), G.basis(1)), G.basis(2)) < 1e-14);
    CHECK(dist(commutator(G.basis(1), G.basis(2)), G.basis(0)) < 1e-14);
    CHECK(dist(commutator(G.basis(2), G.basis(0)), G.basis(1)) < 1e-14);
  }
}

TEST_CASE("closed-form exponentials") {
  const double angle = 0.7;
  const Group su2(GroupKind::SU2);
  Mat expected = Mat::Zero(2, 2);
  expected(0, 0) = std::polar(1.0, -angle / 2);
  expected(1, 1) = std::polar(1.0, angle / 2);
  CHECK(dist(su2.exp(angle * su2.basis(2)), expected) < 1e-14);

  const Group so3(GroupKind::SO3);
  CHECK(dist(so3.exp(angle * so3.basis(2)), rotation_z(angle)) < 1e-14);

  const Group u1(GroupKind::U1);
  CHECK(std::abs(u1.exp(angle * u1.basis(0))(0, 0) - std::polar(1.0, angle)) < 1e-15);

  // Translation by v is [[I, v], [0, 1]].
  const Group r3(GroupKind::R3);
  const std::array<double, 3> v{0.3, -1.2, 2.5};
  const Mat T = r3.exp(r3.from_coeffs(v));
  for (int k = 0; k < 3; ++k) CHECK(std::abs(T(k, 3) - v[k]) < 1e-15);
  CHECK(dist(T.topLeftCorner(3, 3), Mat::Identity(3, 3)) < 1e-15);
}

TEST_CASE("exp and log are mutually inverse on random elements") {
  Rng rng(11);
  for (const char* name : {"U1", "SO2", "SU2", "SO3", "R3", "U1xSU2", "U1xSO2"}) {
    const Group G = Group::parse(name);
    CAPTURE(G.name());
    for (int k = 0; k < 200; ++k) {
      const Mat X = random_algebra(G, rng, 0.8);
      CHECK(G.algebra_residual(X) < 1e-13);
      const Mat g = G.exp(X);
      CHECK(G.group_residual(g) < 1e-12);
      CHECK(dist(G.log(g), X) < 1e-11);
      CHECK(dist(g * G.inverse(g), G.identity()) < 1e-13);
    }
  }
}

TEST_CASE("coefficients round-trip through the basis") {
  Rng rng(5);
  for (const char* name : {"SU2", "SO3", "R3", "U1xSU2"}) {
    const Group G = Group::parse(name);
    const Mat X = random_algebra(G, rng, 1.0);
    CHECK(dist(G.from_coeffs(G.to_coeffs(X)), X) < 1e-14);
  }
}

TEST_CASE("log refuses elements far from the identity") {
  const Group su2(GroupKind::SU2);
  try {
    su2.log(-su2.identity());
    FAIL("expected LogDomain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LogDomain);
  }
}

TEST_CASE("double cover SU(2) -> SO(3)") {
  const Group su2(GroupKind::SU2), so3(GroupKind::SO3);
  for (int k = 0; k < 3; ++k) CHECK(dist(su2_to_so3_algebra(su2.basis(k)), so3.basis(k)) < 1e-14);

  // A half-turn lift of a rotation by angle about the third axis.
  CHECK(dist(su2_to_so3(su2.exp(0.9 * su2.basis(2))), rotation_z(0.9)) < 1e-14);
  CHECK(dist(su2_to_so3(-su2.identity()), so3.identity()) < 1e-15);

  Rng rng(7);
  for (int n = 0; n < 200; ++n) {
    const Mat X = random_algebra(su2, rng, 1.5);
    const Mat h = su2.exp(X);
    CHECK(dist(su2_to_so3(h), so3.exp(su2_to_so3_algebra(X))) < 1e-12);
    const Mat R = su2_to_so3(h);
    const Mat lift = so3_to_su2(R);
    CHECK(dist(su2_to_so3(lift), R) < 1e-12);
    CHECK(lift.trace().real() >= -1e-14);
    CHECK(dist(lift, h) * dist(lift, Mat(-h)) < 1e-10);  // lift is +h or -h
  }
}

TEST_CASE("typed element wrappers") {
  const Group su2(GroupKind::SU2);
  const AlgebraElement X{su2, 0.4 * su2.basis(0)};
  const AlgebraElement Y{su2, 0.3 * su2.basis(1)};
  const GroupElement g = exp(X);
  CHECK(dist(log(g).matrix, X.matrix) < 1e-14);
  CHECK(dist((g * inverse(g)).matrix, su2.identity()) < 1e-14);
  CHECK(dist(bracket(X, Y).matrix, Mat(0.12 * su2.basis(2))) < 1e-14);
  CHECK(dist(ad_action(g, X).matrix, X.matrix) < 1e-14);  // g commutes with its own generator
}

TEST_CASE("shipped crossed modules satisfy equivariance and Peiffer") {
  for (const std::string& name : crossed_module_names()) {
    CAPTURE(name);
    const CrossedModulePtr cm = make_crossed_module(name);
    const CrossedModuleReport r = crossed_module_check(*cm, 1000, 42);
    CHECK(r.samples == 1000);
    CHECK(r.equivariance < 1e-9);
    CHECK(r.peiffer < 1e-9);
  }
  try {
    make_crossed_module("su3-conj");
    FAIL("expected UnknownFamily");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownFamily);
  }
}

TEST_CASE("crossed module maps on known elements") {
  const CrossedModulePtr cover = make_crossed_module("su2-so3");
  const Group su2(GroupKind::SU2);
  CHECK(dist(cover->tau(-su2.identity()), cover->G().identity()) < 1e-15);
  Rng rng(3);
  const Mat g = random_element(cover->G(), rng, 1.0);
  CHECK(dist(cover->tau(cover->tau_section(g)), g) < 1e-12);

  const CrossedModulePtr rot = make_crossed_module("so3-on-r3");
  const Group r3(GroupKind::R3);
  const Mat R = rotation_z(std::numbers::pi / 2);
  const Mat moved = rot->alpha(R, r3.exp(r3.from_coeffs(std::array<double, 3>{1.0, 0.0, 0.0})));
  CHECK(std::abs(moved(0, 3)) < 1e-15);
  CHECK(std::abs(moved(1, 3) - 1.0) < 1e-15);
  try {
    rot->tau_section(R);
    FAIL("expected TauNotInvertible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TauNotInvertible);
  }
}
