#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "pathgauge/surface.hpp"

namespace pathgauge {

/// Tolerance for the pure matrix algebra of plaquettes.
inline constexpr double kTolCat = 1e-10;

/**
 * Morphism (a, b, c, d; h) with a, b, c, d in G and h in H, plus an optional
 * central twist z in G (absent means e).
 *
 *        c
 *    +------+
 *  d |  h   | b
 *    +------+
 *        a
 *
 * In Vert the source is a and the target c; in Horz the source is d and the target b.
 */
struct Plaquette {
  Mat a, b, c, d, h;
  std::optional<Mat> z;

  Mat twist(const Group& G) const { return z ? *z : G.identity(); }
};

Plaquette identity_v(const CrossedModule& cm, const Mat& a);  ///< (a, e, a, e; e)
Plaquette identity_h(const CrossedModule& cm, const Mat& a);  ///< (e, a, e, a; e)

/**
 * upper is applied first: lower (a,b,c,d;h), upper (c,b',c',d';h') give
 * (a, b'b, c', d'd; h alpha(d^-1)h'). Throws NotComposable unless lower.c = upper.a.
 */
Plaquette compose_v(const CrossedModule& cm, const Plaquette& lower, const Plaquette& upper);

/**
 * left is applied first: left (a,b,c,d;h), right (a',b',c',b;h') give
 * (a'a, b', c'c, d; alpha(a^-1)h' h). Throws NotComposable unless left.b = right.d.
 */
Plaquette compose_h(const CrossedModule& cm, const Plaquette& left, const Plaquette& right);

Plaquette inverse_v(const CrossedModule& cm, const Plaquette& m);  ///< (c, b^-1, a, d^-1; alpha(d)h^-1)
Plaquette inverse_h(const CrossedModule& cm, const Plaquette& m);  ///< (a^-1, d, c^-1, b; alpha(a)h^-1)

/// a^-1 b^-1 c d.
Mat tau_boundary(const CrossedModule& cm, const Plaquette& m);

/// |tau(h) - tau_boundary(m) z|.
double quasi_flat_residual(const CrossedModule& cm, const Plaquette& m);
bool is_quasi_flat(const CrossedModule& cm, const Plaquette& m, double tol = kTolCat);

/// Max of the edge differences and |tau(h1) - tau(h2)|.
double tau_equivalence_residual(const CrossedModule& cm, const Plaquette& m1, const Plaquette& m2);
bool tau_equivalent(const CrossedModule& cm, const Plaquette& m1, const Plaquette& m2, double tol = kTolCat);

/// Max edge and label difference, twists included.
double plaquette_distance(const Plaquette& m1, const Plaquette& m2);

/// Largest |z g - g z| over n random elements of G; 0 without a twist.
double centrality_residual(const CrossedModule& cm, const Plaquette& m, int n_samples, std::uint64_t seed);

struct InterchangeReport {
  double boundary = 0.0;       ///< max edge difference of the two composites
  double tau = 0.0;            ///< |tau(h^*) - tau(h_*)|
  double h_difference = 0.0;   ///< |h^* - h_*|, reported without a bound
  Plaquette upper_star, lower_star;
};

/**
 * Window of four plaquettes m (bottom left), m' (bottom right), m'' (top left),
 * m''' (top right). Compares compose_v(compose_h(m, m'), compose_h(m'', m'''))
 * with compose_h(compose_v(m, m''), compose_v(m', m''')).
 * Throws NotQuasiFlat unless all four are quasi-flat.
 */
InterchangeReport interchange_check(const CrossedModule& cm, const Plaquette& m, const Plaquette& m1,
                                    const Plaquette& m2, const Plaquette& m3);

enum class Direction { Vertical, Horizontal };

/// Quasi-flat residual of the composite (m1 lower/left, m2 upper/right).
double quasi_flat_closure_check(const CrossedModule& cm, const Plaquette& m1, const Plaquette& m2,
                                Direction direction);

/**
 * Random quasi-flat plaquette with the given edges where supplied: h is a section
 * of tau at a^-1 b^-1 c d z times a random element of ker tau. When tau is not
 * onto, d (or c when d is fixed) is solved from the boundary condition instead of drawn.
 */
struct EdgeConstraints {
  std::optional<Mat> a = std::nullopt, b = std::nullopt, c = std::nullopt, d = std::nullopt;
};

Plaquette random_quasi_flat(const CrossedModule& cm, Rng& rng, const EdgeConstraints& edges = {},
                            const std::optional<Mat>& z = std::nullopt, double scale = 1.5);

/// Random plaquette without any flatness condition.
Plaquette random_plaquette(const CrossedModule& cm, Rng& rng, double scale = 1.5);

/// True when every element of G can be produced as tau(h) by tau_section.
bool tau_is_onto(const CrossedModule& cm);

/// -I when it is a central element of G, else nothing.
std::optional<Mat> sign_twist(const Group& G);

/**
 * Plaquette of a transported surface: a = abar_0(1), b = a_1(1), c = abar_1(1),
 * d = a_0(1), h = h_0(1); no twist.
 */
Plaquette from_transport(const FieldSet& f, const SurfaceGrid& grid);

struct BridgeReport {
  double quasi_flat = 0.0;  ///< strict quasi-flat residual of the full-surface plaquette
  double pasting = 0.0;     ///< tau-equivalence residual of compose_h(left half, right half) vs full
  Plaquette full, left, right;
};

/// Full and half surfaces on grids whose halves have an even number of t steps.
BridgeReport transport_bridge(const FieldSet& f, SurfaceMapPtr surface, int N);

nlohmann::json matrix_to_json(const Mat& m);
Mat matrix_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Plaquette& m);
Plaquette plaquette_from_json(const nlohmann::json& j);

}  // namespace pathgauge
