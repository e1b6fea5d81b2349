#include <cmath>
#include <numbers>

#include <doctest.h>

#include "pathgauge/pathspace.hpp"
#include "pathgauge/report.hpp"

using namespace pathgauge;

namespace {

double dist(const Mat& x, const Mat& y) { return norm(Mat(x - y)); }

FieldSet landau_fields() {
  const CrossedModulePtr cm = make_crossed_module("su2-conj");
  const Group G = cm->G();
  const ConnectionField Abar = ConnectionField::landau(G, 0.5, G.basis(2));
  const ConnectionField A = ConnectionField::random_poly2(G, 0.3, 17);
  return {cm, Abar, A, TwoFormField::constant(G, 0.4 * G.basis(0))};
}

FieldSet poly_fields(std::uint64_t seed) {
  const CrossedModulePtr cm = make_crossed_module("su2-conj");
  const Group G = cm->G();
  const ConnectionField Abar = ConnectionField::random_poly2(G, 0.3, seed);
  return {cm, Abar, ConnectionField::random_poly2(G, 0.3, seed + 1),
          make_flatting_B(Abar, *cm) + TwoFormField::constant(G, 0.2 * G.basis(1))};
}

PathMapPtr test_arc() { return make_arc(Vec2(0.1, -0.2), 1.0, 0.2, 1.2); }

}  // namespace

TEST_CASE("constant connection along a segment transports by one exponential") {
  const Group su2(GroupKind::SU2);
  const Mat a1 = 0.7 * su2.basis(0) + 0.2 * su2.basis(2), a2 = -0.4 * su2.basis(1);
  const ConnectionField A = ConnectionField::constant(su2, a1, a2);
  const Vec2 from(0.2, 0.1), to(1.1, -0.6);
  const Vec2 dx = to - from;
  const Mat expected = su2.exp(Mat(-(a1 * dx(0) + a2 * dx(1))));
  for (int N : {2, 10, 64}) CHECK(dist(transport(A, sample_path(*make_segment(from, to), N)), expected) < 1e-13);
}

TEST_CASE("abelian holonomy is exp of minus the line integral") {
  // A = (0, i b x1) along an arc: int A = i b [c1 r (sin t1 - sin t0) + r^2 ((t1 - t0) / 2 + (sin 2t1 - sin 2t0) / 4)].
  const Group u1(GroupKind::U1);
  const double b = 0.9, radius = 0.8, c1 = 0.3, t0 = 0.2, t1 = 1.2;
  const ConnectionField A = ConnectionField::landau(u1, b);
  const PathMapPtr arc = make_arc(Vec2(c1, -0.2), radius, t0, t1);
  const double integral =
      b * (c1 * radius * (std::sin(t1) - std::sin(t0)) +
           radius * radius * ((t1 - t0) / 2 + (std::sin(2 * t1) - std::sin(2 * t0)) / 4));
  const cplx expected = std::polar(1.0, -integral);
  std::vector<double> err;
  for (int N : {50, 100, 200}) err.push_back(std::abs(transport(A, sample_path(*arc, N))(0, 0) - expected));
  CHECK(err.back() < 1e-5);
  CHECK(*loglog_slope({50, 100, 200}, err) > 1.8);

  // A closed circle encloses pi r^2; the periodic integrand makes the midpoint rule exact.
  const PathMapPtr circle = make_arc(Vec2(c1, -0.2), radius, 0.0, 2 * std::numbers::pi);
  const cplx enclosed = std::polar(1.0, -b * std::numbers::pi * radius * radius);
  CHECK(std::abs(transport(A, sample_path(*circle, 50))(0, 0) - enclosed) < 1e-13);
}

TEST_CASE("reversed path transports back to the identity") {
  const FieldSet f = poly_fields(3);
  const LiftedPath lift = path_holonomy(f.Abar, sample_path(*test_arc(), 200));
  const Mat back = transport(f.Abar, sample_path(*reversed(test_arc()), 200));
  CHECK(dist(back * lift.frame.back(), f.cm->G().identity()) < 1e-6);
  for (const Mat& frame : lift.frame) CHECK(f.cm->G().group_residual(frame) < 1e-12);
}

TEST_CASE("seeded lift and right translation agree") {
  const FieldSet f = poly_fields(5);
  const SampledPath gamma = sample_path(*test_arc(), 100);
  Rng rng(9);
  const Mat g = random_element(f.cm->G(), rng, 1.0);
  const LiftedPath seeded = horizontal_lift_path(f.Abar, gamma, g);
  const LiftedPath translated = right_translate(path_holonomy(f.Abar, gamma), g);
  for (std::size_t k = 0; k < seeded.frame.size(); ++k) CHECK(dist(seeded.frame[k], translated.frame[k]) < 1e-13);
}

TEST_CASE("Stokes residual decays at second order on the landau scenario") {
  const FieldSet f = landau_fields();
  const TangentMap bump = bump_tangent(Vec2(0.3, -0.2));
  std::vector<int> Ns{50, 100, 200, 400};
  std::vector<double> residual;
  for (int N : Ns) {
    const LiftedPath lift = path_holonomy(f.Abar, sample_path(*test_arc(), N));
    const TangentField v = sample_tangent(bump, N);
    const LiftedTangentField field = lift_tangent_field(f.Abar, lift, v, f.Abar.along(lift.base.x[0], v.v[0]));
    residual.push_back(stokes_residual_max(f.Abar, lift, field));
  }
  CHECK(residual[2] < 1e-6);
  const double slope = *loglog_slope(Ns, residual);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("flat connection gives a constant lifted tangent field") {
  const Group su2(GroupKind::SU2);
  const ConnectionField Abar = ConnectionField::constant(su2, 0.3 * su2.basis(0), Mat(0.0 * su2.basis(0)));
  const LiftedPath lift = path_holonomy(Abar, sample_path(*test_arc(), 50));
  const TangentField v = sample_tangent(constant_tangent(Vec2(0.2, 0.5)), 50);
  const Mat w0 = su2.basis(1);
  const LiftedTangentField field = lift_tangent_field(Abar, lift, v, w0);
  for (const Mat& w : field.w) CHECK(dist(w, w0) < 1e-14);
}

TEST_CASE("omega connection axioms") {
  for (const FieldSet& f : {landau_fields(), poly_fields(8)}) {
    const LiftedPath lift = path_holonomy(f.Abar, sample_path(*test_arc(), 200));
    const TangentField v = sample_tangent(bump_tangent(Vec2(0.2, 0.1)), 200);
    const ConnectionAxiomReport r = connection_axioms_check(f, lift, v, 20, 4);
    CHECK(r.vertical < 1e-10);
    CHECK(r.equivariance < 1e-10);
  }
}

TEST_CASE("omega-horizontal lift is annihilated and matches the forward form") {
  for (const FieldSet& f : {landau_fields(), poly_fields(12)}) {
    const LiftedPath lift = path_holonomy(f.Abar, sample_path(*test_arc(), 200));
    const TangentField v = sample_tangent(bump_tangent(Vec2(-0.3, 0.2)), 200);
    const OmegaLiftReport r = omega_lift_check(f, lift, omega_horizontal_lift(f, lift, v));
    CHECK(r.omega < 1e-8);
    CHECK(r.cross_form < 1e-8);
  }
}

TEST_CASE("omega pulled back by the section agrees with omega on the lifted field") {
  const FieldSet f = poly_fields(30);
  const TangentMap var = linear_tangent(Vec2(0.4, -0.1), Vec2(-0.2, 0.3));
  std::vector<double> diff;
  for (int N : {50, 100, 200}) {
    const LiftedPath lift = path_holonomy(f.Abar, sample_path(*test_arc(), N));
    const TangentField V = sample_tangent(var, N);
    const LiftedTangentField field = lift_tangent_field(f.Abar, lift, V, f.Abar.along(lift.base.x[0], V.v[0]));
    diff.push_back(dist(omega_eval(f, lift, field), omega_local_eval(f, lift, V)));
  }
  CHECK(diff.back() < 1e-5);
  CHECK(*loglog_slope({50, 100, 200}, diff) > 1.8);
}

TEST_CASE("truncated omega agrees with the full form only when Abar vanishes") {
  const TangentMap var = linear_tangent(Vec2(0.4, -0.1), Vec2(-0.2, 0.3));
  const SampledPath gamma = sample_path(*test_arc(), 100);
  const TangentField V = sample_tangent(var, 100);

  FieldSet flat = poly_fields(40);
  flat.Abar = ConnectionField::zero(flat.cm->G());
  CHECK(dist(omega_local_eval_truncated(flat, gamma, V), omega_local_eval(flat, gamma, V)) < 1e-12);

  const FieldSet curved = poly_fields(40);
  CHECK(dist(omega_local_eval_truncated(curved, gamma, V), omega_local_eval(curved, gamma, V)) > 1e-3);
}

TEST_CASE("endpoint-only omega drops the Chen term") {
  FieldSet f = poly_fields(50);
  const SampledPath gamma = sample_path(*test_arc(), 100);
  const LiftedPath lift = path_holonomy(f.Abar, gamma);
  const TangentField V = sample_tangent(bump_tangent(Vec2(0.1, 0.2)), 100);
  const Mat full = omega_local_eval(f, lift, V, OmegaTerms::Full);
  const Mat endpoint = omega_local_eval(f, lift, V, OmegaTerms::EndpointOnly);
  CHECK(dist(full, endpoint) > 1e-3);
  f.B = TwoFormField::zero(f.cm->H());
  f.Abar = ConnectionField::zero(f.cm->G());
  const LiftedPath trivial = path_holonomy(f.Abar, gamma);
  CHECK(dist(omega_local_eval(f, trivial, V, OmegaTerms::Full), omega_local_eval(f, trivial, V, OmegaTerms::EndpointOnly)) <
        1e-14);
}

TEST_CASE("Chen integral of a constant abelian 2-form is the swept area") {
  const CrossedModulePtr cm = make_crossed_module("u1-conj");
  const Group u1 = cm->G();
  const double beta = 0.7;
  const TwoFormField B = TwoFormField::constant(u1, beta * u1.basis(0));
  // Unit segment along x1 varied by the constant field (0, 1): area 1.
  const SampledPath gamma = sample_path(*make_segment(Vec2(0, 0), Vec2(1, 0)), 20);
  const LiftedPath lift = path_holonomy(ConnectionField::zero(u1), gamma);
  const TangentField v = sample_tangent(constant_tangent(Vec2(0, 1)), 20);
  CHECK(std::abs(chen_integral_2form(B, *cm, lift, v)(0, 0) - cplx(0, beta)) < 1e-14);
}

TEST_CASE("curvature of omega in the abelian case") {
  // Abar = 0, A landau with constant F = i b, B constant i beta: the total is
  // i (b + beta) X(1) ^ Y(1) - i beta X(0) ^ Y(0).
  const CrossedModulePtr cm = make_crossed_module("u1-conj");
  const Group u1 = cm->G();
  const double b = 0.6, beta = 0.25;
  const FieldSet f{cm, ConnectionField::zero(u1), ConnectionField::landau(u1, b),
                   TwoFormField::constant(u1, beta * u1.basis(0))};
  const Vec2 X(1.0, 0.0), Y0(0.0, 0.5), Y1(0.3, 1.0);
  PathVariation var{test_arc(), constant_tangent(X), constant_tangent(Vec2::Zero()), linear_tangent(Y0, Y1),
                    constant_tangent(Vec2(Y1 - Y0))};
  const CurvatureReport r = omega_curvature_eval(f, var, 100);
  const double expected = (b + beta) * wedge(X, Y1) - beta * wedge(X, Y0);
  CHECK(std::abs(r.total(0, 0) - cplx(0, expected)) < 1e-8);
  CHECK(norm(r.cross) < 1e-14);
  CHECK(norm(r.product) < 1e-14);

  try {
    omega_curvature_eval(f, var, 100, 0.5);
    FAIL("expected VariationTooCoarse");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::VariationTooCoarse);
  }
}

TEST_CASE("field set validation") {
  FieldSet f = poly_fields(1);
  f.B = TwoFormField::zero(Group(GroupKind::U1));
  try {
    f.validate();
    FAIL("expected TagMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TagMismatch);
  }
}
