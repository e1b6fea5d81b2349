#include <cmath>

#include <doctest.h>

#include "pathgauge/report.hpp"
#include "pathgauge/surface.hpp"

using namespace pathgauge;

namespace {

double dist(const Mat& x, const Mat& y) { return norm(Mat(x - y)); }

FieldSet su2_fields(std::uint64_t seed, double scale, bool fake_flat) {
  const CrossedModulePtr cm = make_crossed_module("su2-conj");
  const Group G = cm->G();
  const ConnectionField Abar = ConnectionField::random_poly2(G, scale, seed);
  const ConnectionField A = ConnectionField::random_poly2(G, scale, seed + 1);
  TwoFormField B = make_flatting_B(Abar, *cm);
  if (!fake_flat) B = B + TwoFormField::constant(G, 0.3 * G.basis(2));
  return {cm, Abar, A, B};
}

FieldSet abelian_fields(double beta) {
  const CrossedModulePtr cm = make_crossed_module("u1-conj");
  const Group u1 = cm->G();
  return {cm, ConnectionField::landau(u1, 0.5), ConnectionField::landau(u1, 0.8),
          TwoFormField::constant(u1, beta * u1.basis(0))};
}

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::NonFinite;
}

}  // namespace

TEST_CASE("surface grids") {
  const SurfaceGrid grid = make_surface_grid(make_warp(0.2), 40, 20);
  CHECK(grid.points.size() == 41u * 21u);
  CHECK(partials_fd_residual(grid) < 5e-3);
  CHECK((grid.points[grid.index(40, 20)] - Vec2(1, 1)).norm() < 1e-15);
  CHECK(code_of([] { make_surface_grid(make_warp(0.2), 41, 20); }) == ErrorCode::GridMismatch);
  CHECK(code_of([] { make_surface_grid(make_warp(0.2), 20, 0); }) == ErrorCode::GridMismatch);
}

TEST_CASE("surface lift frames") {
  const FieldSet f = su2_fields(3, 0.3, false);
  const SurfaceGrid grid = make_surface_grid(make_warp(0.2), 20, 20);
  Rng rng(1);
  const Mat seed = random_element(f.cm->G(), rng, 1.0);
  const LiftedSurface lift = surface_lift(f.Abar, f.A, grid, seed);
  CHECK(dist(lift.frame(0, 0), seed) < 1e-15);
  // Left edge is A-transport up Gamma(0, s), rows are Abar-holonomies from e.
  const std::vector<Mat> left = edge_transport(f.A, grid, 0);
  for (int j = 0; j <= grid.Ns; ++j) CHECK(dist(lift.frame(0, j), Mat(left[j] * seed)) < 1e-13);
  CHECK(dist(lift.frame(grid.Nt, 0), Mat(path_holonomy(f.Abar, grid.row(0)).frame.back() * seed)) < 1e-13);
}

TEST_CASE("bi-holonomy loop composition matches the closed form") {
  for (std::uint64_t seed : {2u, 9u}) {
    const FieldSet f = su2_fields(seed, 0.4, false);
    const SurfaceGrid grid = make_surface_grid(make_warp(0.25), 60, 40);
    const LiftedSurface lift = surface_lift(f.Abar, f.A, grid, f.cm->G().identity());
    const std::vector<Mat> closed = biholonomy_closed_form(lift, edge_transport(f.A, grid, grid.Nt));
    const std::vector<Mat> loop = biholonomy_right_edge(f.Abar, f.A, grid);
    REQUIRE(loop.size() == closed.size());
    for (std::size_t j = 0; j < loop.size(); ++j) CHECK(dist(loop[j], closed[j]) < 1e-8);
    CHECK(dist(biholonomy(f.Abar, f.A, grid, grid.Nt, grid.Ns), loop.back()) < 1e-13);
    // Degenerate loops.
    CHECK(dist(biholonomy(f.Abar, f.A, grid, 0, grid.Ns), f.cm->G().identity()) < 1e-12);
    CHECK(dist(biholonomy(f.Abar, f.A, grid, grid.Nt, 0), f.cm->G().identity()) < 1e-12);
  }
}

TEST_CASE("bi-holonomy is trivial when A = Abar is flat") {
  const Group su2(GroupKind::SU2);
  const ConnectionField flat = ConnectionField::constant(su2, 0.6 * su2.basis(0), Mat::Zero(2, 2));
  const SurfaceGrid grid = make_surface_grid(make_warp(0.2), 20, 20);
  CHECK(dist(biholonomy(flat, flat, grid, 20, 20), su2.identity()) < 1e-13);
}

TEST_CASE("abelian surface holonomy is exp(-i beta area)") {
  const double beta = 0.7;
  const FieldSet f = abelian_fields(beta);
  for (double scale : {1.0, 1.5}) {
    const SurfaceGrid grid = make_surface_grid(make_identity_square(scale, Vec2(0.2, -0.1)), 50, 50);
    const std::vector<Mat> h0 = surface_holonomy(f, grid);
    const cplx expected = std::polar(1.0, -beta * scale * scale);
    CHECK(std::abs(h0.back()(0, 0) - expected) < 1e-12);
    for (int j = 0; j <= grid.Ns; ++j)
      CHECK(std::abs(h0[j](0, 0) - std::polar(1.0, -beta * scale * scale * grid.s[j])) < 1e-12);
  }
}

TEST_CASE("abelian transport identity matches both closed-form sides") {
  const FieldSet f = abelian_fields(0.7);
  const TgbReport r = verify_tgb(f, make_surface_grid(make_identity_square(), 100, 100));
  CHECK(r.residual < 1e-6);
}

TEST_CASE("transport identity decays at second order on su(2)") {
  const FieldSet f = su2_fields(21, 0.3, false);
  const std::vector<int> Ns{50, 100, 200};
  std::vector<double> tgb, ev1;
  for (int N : Ns) {
    const SurfaceGrid grid = make_surface_grid(make_warp(0.2), N, N);
    tgb.push_back(verify_tgb(f, grid).residual);
    ev1.push_back(ev1_transport_check(f, grid));
  }
  CHECK(tgb.back() < 1e-5);
  CHECK(ev1.back() < 1e-5);
  CHECK(*loglog_slope(Ns, tgb) > 1.8);
  CHECK(*loglog_slope(Ns, ev1) > 1.8);
}

TEST_CASE("theta transport coincides with h0 when the G frames are trivial") {
  const CrossedModulePtr cm = make_crossed_module("su2-conj");
  const Group G = cm->G();
  std::array<Mat, kMonomials> coeffs;
  Rng rng(6);
  for (Mat& c : coeffs) c = random_algebra(G, rng, 0.4);
  const FieldSet f{cm, ConnectionField::zero(G), ConnectionField::zero(G), TwoFormField::poly2(G, coeffs)};
  const SurfaceGrid grid = make_surface_grid(make_warp(0.2), 40, 40);
  const std::vector<Mat> theta = theta_transport(f, grid);
  const std::vector<Mat> h0 = surface_holonomy(f, grid);
  for (std::size_t j = 0; j < h0.size(); ++j) CHECK(dist(theta[j], h0[j]) < 1e-12);
  CHECK(dist(h0.back(), G.identity()) > 1e-2);
}

TEST_CASE("omega transport against the endpoint-only transport") {
  // With B = 0 the Chen term vanishes and both transports coincide.
  FieldSet f = su2_fields(4, 0.3, false);
  f.B = TwoFormField::zero(f.cm->H());
  const SurfaceGrid grid = make_surface_grid(make_warp(0.2), 40, 40);
  const LiftedSurface lift = surface_lift(f.Abar, f.A, grid, f.cm->G().identity());
  const std::vector<Mat> full = omega_transport_local(f, lift, OmegaTerms::Full);
  const std::vector<Mat> endpoint = omega_transport_local(f, lift, OmegaTerms::EndpointOnly);
  for (std::size_t j = 0; j < full.size(); ++j) CHECK(dist(full[j], endpoint[j]) < 1e-13);
}

TEST_CASE("reparametrization invariance under fake flatness") {
  const FieldSet f = su2_fields(31, 0.2, true);
  const Reparametrization phi{0.2, 0.2, Reparametrization::Mode::I};
  std::vector<double> residual;
  for (int N : {50, 100}) {
    const ReparamReport r = verify_reparam(f, make_surface_grid(make_warp(0.2), N, N), phi);
    CHECK(r.fake_curvature < 1e-12);
    residual.push_back(r.residual);
  }
  CHECK(residual[1] < 1e-4);
  CHECK(*loglog_slope({50, 100}, residual) > 1.8);
}

TEST_CASE("reparametrization preconditions") {
  const SurfaceGrid grid = make_surface_grid(make_warp(0.2), 20, 20);
  const Reparametrization phi{0.2, 0.2, Reparametrization::Mode::I};
  const FieldSet curved = su2_fields(31, 0.2, false);
  CHECK(code_of([&] { verify_reparam(curved, grid, phi); }) == ErrorCode::ConditionViolated);
  ReparamOptions loose;
  loose.enforce_condition = false;
  CHECK(std::isfinite(verify_reparam(curved, grid, phi, loose).residual));

  // Mode ii needs A = Abar.
  const FieldSet flat = su2_fields(31, 0.2, true);
  const Reparametrization mixing{0.2, 0.2, Reparametrization::Mode::II};
  CHECK(code_of([&] { verify_reparam(flat, grid, mixing); }) == ErrorCode::ConditionViolated);

  const Reparametrization folded{2.0, 0.2, Reparametrization::Mode::I};
  CHECK(code_of([&] { folded.validate(20); }) == ErrorCode::NotDiffeo);
  CHECK(code_of([&] { reparametrize_surface(grid, folded); }) == ErrorCode::NotDiffeo);
}

TEST_CASE("reparametrization maps fix the corners and invert") {
  for (auto mode : {Reparametrization::Mode::I, Reparametrization::Mode::II}) {
    const Reparametrization phi{0.3, 0.4, mode};
    for (double t : {0.0, 1.0})
      for (double s : {0.0, 1.0}) CHECK((phi(t, s) - Vec2(t, s)).norm() < 1e-15);
    const Vec2 image = phi(0.3, 0.6);
    CHECK((phi.inverse(image(0), image(1)) - Vec2(0.3, 0.6)).norm() < 1e-12);
  }
}

TEST_CASE("half-path demonstration reports a finite difference") {
  const FieldSet f = su2_fields(5, 0.3, false);
  const HalfPathReport r = halfpath_demo(f, make_surface_grid(make_warp(0.2), 40, 40));
  CHECK(std::isfinite(r.difference));
  CHECK(r.difference >= 0.0);
}
