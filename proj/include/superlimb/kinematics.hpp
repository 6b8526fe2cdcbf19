#pragma once

// Coupled human / supernumerary-limb kinematics.
//
// The human joint vector q_h is split into (q_h1, q_h2) and the limb joint
// vector q_s into (q_s1, q_s2). The coupled coordinates follow q_h2 = K q_s2
// for a constant K, and the remaining human coordinates are a function of the
// limb: q_h1 = f(q_s1). Rates therefore map through the block matrix
//
//     [q_h1']   [J_hat  0] [q_s1']
//     [q_h2'] = [  0    K] [q_s2']
//
// All block matrices below are expressed in this partitioned order; the
// rate-level functions accept and return vectors in the natural joint order.

#include <functional>
#include <optional>
#include <vector>

#include "superlimb/numerics.hpp"

namespace superlimb {

enum class DofType { Rotational, Translational };

struct CoupledConfig {
  Vector q_s;
  Vector q_h;
  std::vector<DofType> s_types;
  std::vector<DofType> h_types;
  std::vector<int> s1;  // indices into q_s
  std::vector<int> s2;
  std::vector<int> h1;  // indices into q_h
  std::vector<int> h2;
  Matrix k_couple;      // |h2| x |s2|

  /// Throws DimensionMismatch on inconsistent sizes, overlapping or
  /// incomplete partitions, mixed rotational/translational coupling, or a
  /// coupling matrix without full row rank.
  void validate() const;

  Vector q_s1() const;
  Vector q_s2() const;
};

/// q_h1 = f(q_s1) with an optional analytic Jacobian d f / d q_s1.
struct ForwardMap {
  std::function<Vector(const Vector&)> map;
  std::function<Matrix(const Vector&)> jacobian;
};

struct CoupledJacobian {
  Matrix j_hat;     // |h1| x |s1|
  Matrix k_couple;  // |h2| x |s2|
  Matrix block;     // [[j_hat, 0], [0, K]]
  std::vector<int> s1, s2, h1, h2;
  Eigen::Index s = 0;
  Eigen::Index h = 0;

  bool is_square() const { return block.rows() == block.cols(); }
};

/// Assembles the block Jacobian at the configuration in `config`. Uses the
/// analytic Jacobian of `fk` when present, central differences otherwise.
CoupledJacobian coupled_jacobian(const CoupledConfig& config, const ForwardMap& fk);

/// Builds a CoupledJacobian directly from its two blocks with the trivial
/// partition (s1 first, then s2; h1 first, then h2).
CoupledJacobian make_coupled_jacobian(const Matrix& j_hat, const Matrix& k_couple);

inline constexpr double kDefaultCondMax = 1e6;

/// 2-norm condition number of the assembled block. Throws SingularError when
/// it exceeds cond_max (an exactly singular block reports +inf).
double singularity_guard(const CoupledJacobian& j, double cond_max = kDefaultCondMax);

/// Limb joint rates reproducing the human rates. Square blocks are inverted
/// exactly; wide blocks use [pinv(J_hat), 0; 0, K^-1], which for the
/// block-diagonal structure equals the minimum-norm solution.
Vector desired_joint_rates(const CoupledJacobian& j, const Vector& qdot_h,
                           double cond_max = kDefaultCondMax);

/// q_s^d = q_s^a + (J^-1 or J^+) qdot_h * dt, holding qdot_h over one control period.
Vector desired_joint_positions(const CoupledJacobian& j, const Vector& qdot_h,
                               const Vector& q_s_actual, double dt,
                               double cond_max = kDefaultCondMax);

}  // namespace superlimb
