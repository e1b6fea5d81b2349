#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "pathgauge/error.hpp"

namespace pathgauge {

using cplx = std::complex<double>;

/// Complex square matrix of size at most 4, stored without heap allocation.
using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;

using Rng = std::mt19937_64;

/// Frobenius norm.
double norm(const Mat& m);

/// Largest singular value.
double operator_norm(const Mat& m);

bool all_finite(const Mat& m);

enum class GroupKind : std::uint8_t { U1, SO2, SU2, SO3, R3 };

/**
 * Descriptor of a matrix Lie group: one of the shipped families or a
 * block-diagonal product of them (total matrix size at most 4).
 *
 * Algebra bases:
 *   U1   i
 *   SO2  [[0,-1],[1,0]]
 *   SU2  -i sigma_k / 2, so that [e1,e2] = e3
 *   SO3  L_k with (L_k)_ij = -eps_kij, so that [L1,L2] = L3
 *   R3   translations x -> x + v, as 4x4 affine matrices [[I, v],[0, 1]]
 */
class Group {
 public:
  Group() : Group(GroupKind::U1) {}
  explicit Group(GroupKind kind);

  static Group product(std::initializer_list<GroupKind> kinds);

  /// Parses "U1", "SO2", "SU2", "SO3", "R3" or products such as "U1xSU2".
  static Group parse(std::string_view name);

  std::string name() const;
  int dim() const;
  int algebra_dim() const;
  int factor_count() const { return n_; }
  GroupKind factor(int k) const { return kinds_[k]; }
  bool is_abelian() const;

  bool operator==(const Group& other) const;
  bool operator!=(const Group& other) const { return !(*this == other); }

  Mat identity() const;
  Mat zero_algebra() const;
  Mat basis(int k) const;
  Mat from_coeffs(std::span<const double> coeffs) const;
  std::vector<double> to_coeffs(const Mat& X) const;

  Mat exp(const Mat& X) const;
  /// Throws LogDomain when the operator norm of g - I is 1.9 or more.
  Mat log(const Mat& g) const;
  Mat inverse(const Mat& g) const;

  /// Residual of the defining relations (unitarity, determinant, block shape).
  double group_residual(const Mat& g) const;
  /// Distance from the tangent algebra.
  double algebra_residual(const Mat& X) const;

 private:
  std::array<GroupKind, 3> kinds_{};
  int n_ = 0;
};

struct GroupElement {
  Group group;
  Mat matrix;
};

struct AlgebraElement {
  Group group;
  Mat matrix;
};

GroupElement exp(const AlgebraElement& X);
AlgebraElement log(const GroupElement& g);
/// g X g^-1.
AlgebraElement ad_action(const GroupElement& g, const AlgebraElement& X);
AlgebraElement bracket(const AlgebraElement& X, const AlgebraElement& Y);
GroupElement operator*(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& g);

inline Mat ad(const Mat& g, const Mat& g_inv, const Mat& X) { return g * X * g_inv; }
inline Mat commutator(const Mat& X, const Mat& Y) { return X * Y - Y * X; }

Mat random_algebra(const Group& G, Rng& rng, double scale);
Mat random_element(const Group& G, Rng& rng, double scale);

/// Double cover SU(2) -> SO(3), h -> (1/2) tr(sigma_i h sigma_j h^dagger).
Mat su2_to_so3(const Mat& h);
/// Derivative of the cover on su(2).
Mat su2_to_so3_algebra(const Mat& X);
/// Right inverse of the cover choosing the lift with non-negative trace.
Mat so3_to_su2(const Mat& R);

/**
 * Crossed module (G, H, tau, alpha). Group-level maps act on matrices of the
 * tagged groups; the algebra-level maps are their derivatives (tau at the
 * identity, alpha(g) in the H slot).
 */
class CrossedModule {
 public:
  virtual ~CrossedModule() = default;

  virtual std::string name() const = 0;
  virtual Group G() const = 0;
  virtual Group H() const = 0;

  virtual Mat tau(const Mat& h) const = 0;
  virtual Mat tau_alg(const Mat& K) const = 0;
  virtual Mat alpha(const Mat& g, const Mat& h) const = 0;
  virtual Mat alpha_alg(const Mat& g, const Mat& K) const = 0;

  virtual bool tau_is_identity() const { return false; }
  /// Some h with tau(h) = g, for g in the image of tau.
  virtual Mat tau_section(const Mat& g) const;
};

using CrossedModulePtr = std::shared_ptr<const CrossedModule>;

/// G = H, tau = id, alpha = conjugation.
CrossedModulePtr make_conjugation_module(const Group& G, std::string name);

/// Shipped modules by identifier; throws UnknownFamily.
CrossedModulePtr make_crossed_module(std::string_view name);
std::vector<std::string> crossed_module_names();

struct CrossedModuleReport {
  double equivariance = 0.0;  ///< max |tau(alpha(g)h) - g tau(h) g^-1|
  double peiffer = 0.0;       ///< max |alpha(tau(h))h' - h h' h^-1|
  int samples = 0;
};

CrossedModuleReport crossed_module_check(const CrossedModule& cm, int n_samples, std::uint64_t seed);

}  // namespace pathgauge
