#pragma once

#include <array>
#include <functional>
#include <string>

#include <Eigen/Core>

#include "pathgauge/liecore.hpp"

namespace pathgauge {

/// Point or tangent vector of the base plane.
using Vec2 = Eigen::Vector2d;

/// (A1, A2) components of a connection at a point.
using Components = std::array<Mat, 2>;

/// Monomials 1, x1, x2, x1^2, x1 x2, x2^2.
inline constexpr int kMonomials = 6;

/**
 * LG-valued connection 1-form on the plane in the global trivialization,
 * A = A1 dx1 + A2 dx2, with each component a polynomial of degree <= 2
 * in the coordinates. Every shipped family (zero, constant, affine,
 * landau, poly2) is a special case, so derivatives are exact.
 */
class ConnectionField {
 public:
  ConnectionField() = default;
  ConnectionField(Group group, std::string family, std::array<Components, kMonomials> coeffs);

  static ConnectionField zero(const Group& G);
  static ConnectionField constant(const Group& G, const Mat& a1, const Mat& a2);
  /// A = (0, b x1 K); K defaults to the first algebra basis element (i for U1).
  static ConnectionField landau(const Group& G, double b, const Mat& generator);
  static ConnectionField landau(const Group& G, double b) { return landau(G, b, G.basis(0)); }
  /// Components with algebra coefficients drawn uniformly from [-scale, scale].
  static ConnectionField random_poly2(const Group& G, double scale, std::uint64_t seed);

  const Group& group() const { return group_; }
  const std::string& family() const { return family_; }
  const std::array<Components, kMonomials>& coeffs() const { return coeffs_; }

  Components operator()(const Vec2& x) const;
  /// A1 u1 + A2 u2 at x.
  Mat along(const Vec2& x, const Vec2& u) const;
  /// d[mu][nu] = partial_mu A_nu at x.
  std::array<Components, 2> derivative(const Vec2& x) const;

  /// Constant gauge rotation A -> g A g^-1.
  ConnectionField conjugated(const Mat& g) const;
  ConnectionField operator+(const ConnectionField& other) const;

 private:
  Group group_;
  std::string family_ = "zero";
  std::array<Components, kMonomials> coeffs_;
};

/**
 * LH-valued 2-form B = B12 dx1 ^ dx2 on the plane, given by its single
 * component. B(u, v) = B12 (u1 v2 - u2 v1).
 */
class TwoFormField {
 public:
  using Evaluator = std::function<Mat(const Vec2&)>;

  TwoFormField() = default;
  TwoFormField(Group group, std::string family, Evaluator eval);

  static TwoFormField zero(const Group& H);
  static TwoFormField constant(const Group& H, const Mat& value);
  static TwoFormField poly2(const Group& H, const std::array<Mat, kMonomials>& coeffs);

  const Group& group() const { return group_; }
  const std::string& family() const { return family_; }

  /// B12 at x; throws FieldEvaluation on non-finite output.
  Mat operator()(const Vec2& x) const;
  Mat pair(const Vec2& x, const Vec2& u, const Vec2& v) const;

  TwoFormField operator+(const TwoFormField& other) const;
  /// B -> alpha(g) B for a constant g in G.
  TwoFormField acted(const CrossedModulePtr& cm, const Mat& g) const;

 private:
  Group group_;
  std::string family_ = "zero";
  Evaluator eval_;
};

inline double wedge(const Vec2& u, const Vec2& v) { return u(0) * v(1) - u(1) * v(0); }

std::array<double, kMonomials> monomials(const Vec2& x);

/// F12 = d1 A2 - d2 A1 + [A1, A2].
Mat curvature(const ConnectionField& A, const Vec2& x);

/// F12 of Abar plus tau(B12).
Mat fake_curvature(const ConnectionField& Abar, const TwoFormField& B, const CrossedModule& cm, const Vec2& x);

/// B12 = -F12 of Abar; requires tau = id, else TauNotInvertible.
TwoFormField make_flatting_B(const ConnectionField& Abar, const CrossedModule& cm);

}  // namespace pathgauge
