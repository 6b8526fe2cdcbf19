#pragma once

// Task-space virtual spring at the limb's support point. Stiffness and the
// spring's rest position (equilibrium point) are the two command inputs; the
// supported load is compensated by a separate feedforward force.

#include <array>

#include "superlimb/numerics.hpp"

namespace superlimb {

struct TaskSpaceController {
  Matrix k_task;     // m x m, N/m
  Vector x_eq;       // m, equilibrium point
  Vector f_gravity;  // m, N
  Matrix damping;    // m x m, N s/m; zero unless configured
  int level = 0;     // active entry of the stiffness table, 0 when unset

  Eigen::Index dim() const { return x_eq.size(); }
  /// Builds a controller with zero damping and no active level.
  static TaskSpaceController make(const Matrix& k_task, const Vector& x_eq, const Vector& f_gravity);
};

using StiffnessTable = std::array<Matrix, 4>;

/// diag(100), diag(200), diag(400), diag(800) N/m in `dim` dimensions.
StiffnessTable default_stiffness_table(Eigen::Index dim);

/// F = K (x_eq - x) + F_gravity.
Vector control_force(const TaskSpaceController& ctrl, const Vector& x);

/// Same, minus the damping term D xdot.
Vector control_force(const TaskSpaceController& ctrl, const Vector& x, const Vector& xdot);

/// Level is 1-based. Throws BadLevel outside 1..4 and NotSymmetric /
/// DimensionMismatch for unusable tables.
TaskSpaceController set_stiffness_level(const TaskSpaceController& ctrl, int level,
                                        const StiffnessTable& table);

/// Moves x_eq by K^-1 delta_f so the force at any fixed x grows by delta_f.
/// Throws SingularStiffness when delta_f has a component K cannot produce.
TaskSpaceController shift_equilibrium(const TaskSpaceController& ctrl, const Vector& delta_f);

/// tau = J^T F.
Vector task_to_joint_torque(const Matrix& j_task, const Vector& f);

struct FrictionModel {
  Vector coulomb;  // N m per joint
  Vector viscous;  // N m s/rad per joint
  double stiction_breakaway_ratio = 1.0;
  double v_eps = 1e-3;  // rad/s

  static FrictionModel none(Eigen::Index joints);
  static FrictionModel coulomb_only(Eigen::Index joints, double coulomb);
  void validate(Eigen::Index joints) const;
};

/// Coulomb + viscous friction with a stiction band. A joint slower than v_eps
/// holds against the applied torque up to breakaway_ratio * coulomb.
Vector friction_torque(const FrictionModel& model, const Vector& qdot, const Vector& tau_applied);

}  // namespace superlimb
