#include "superlimb/stiffness_control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "superlimb/error.hpp"

namespace superlimb {

TaskSpaceController TaskSpaceController::make(const Matrix& k_task, const Vector& x_eq,
                                              const Vector& f_gravity) {
  const Eigen::Index m = x_eq.size();
  if (k_task.rows() != m || k_task.cols() != m || f_gravity.size() != m) {
    throw Error(ErrorCode::DimensionMismatch, "controller blocks must share the task dimension");
  }
  return {k_task, x_eq, f_gravity, Matrix::Zero(m, m), 0};
}

StiffnessTable default_stiffness_table(Eigen::Index dim) {
  StiffnessTable table;
  const std::array<double, 4> levels{100.0, 200.0, 400.0, 800.0};
  for (size_t i = 0; i < 4; ++i) table[i] = levels[i] * Matrix::Identity(dim, dim);
  return table;
}

Vector control_force(const TaskSpaceController& ctrl, const Vector& x) {
  if (x.size() != ctrl.dim() || ctrl.k_task.rows() != ctrl.dim() ||
      ctrl.f_gravity.size() != ctrl.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "task position has length " +
                                                  std::to_string(x.size()) + ", controller has " +
                                                  std::to_string(ctrl.dim()));
  }
  return ctrl.k_task * (ctrl.x_eq - x) + ctrl.f_gravity;
}

Vector control_force(const TaskSpaceController& ctrl, const Vector& x, const Vector& xdot) {
  if (xdot.size() != ctrl.dim()) throw Error(ErrorCode::DimensionMismatch, "task velocity length");
  Vector f = control_force(ctrl, x);
  if (ctrl.damping.size() != 0) f -= ctrl.damping * xdot;
  return f;
}

TaskSpaceController set_stiffness_level(const TaskSpaceController& ctrl, int level,
                                        const StiffnessTable& table) {
  if (level < 1 || level > 4) {
    throw Error(ErrorCode::BadLevel, "stiffness level " + std::to_string(level) + " not in 1..4");
  }
  for (const Matrix& k : table) {
    if (k.rows() != ctrl.dim() || k.cols() != ctrl.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "stiffness table entry has wrong size");
    }
    if (!psd_check(k, 1e-9 * std::max(1.0, inf_norm(k))).is_psd) {
      throw Error(ErrorCode::BadLevel, "stiffness table entry is not positive semidefinite");
    }
  }
  TaskSpaceController out = ctrl;
  out.k_task = table[static_cast<size_t>(level - 1)];
  out.level = level;
  return out;
}

TaskSpaceController shift_equilibrium(const TaskSpaceController& ctrl, const Vector& delta_f) {
  if (delta_f.size() != ctrl.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "force change has wrong length");
  }
  if (delta_f.isZero(0.0)) return ctrl;

  const auto lu = ctrl.k_task.fullPivLu();
  Vector dx;
  if (lu.isInvertible()) {
    dx = lu.solve(delta_f);
  } else {
    dx = svd_pinv(ctrl.k_task) * delta_f;
  }
  const double scale = std::max(1.0, delta_f.cwiseAbs().maxCoeff());
  if (!dx.allFinite() || (ctrl.k_task * dx - delta_f).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorCode::SingularStiffness,
                "stiffness is singular along the commanded force direction");
  }
  TaskSpaceController out = ctrl;
  out.x_eq = ctrl.x_eq + dx;
  return out;
}

Vector task_to_joint_torque(const Matrix& j_task, const Vector& f) {
  if (j_task.rows() != f.size()) {
    throw Error(ErrorCode::DimensionMismatch, "task Jacobian has " + std::to_string(j_task.rows()) +
                                                  " rows, force has " + std::to_string(f.size()));
  }
  return j_task.transpose() * f;
}

FrictionModel FrictionModel::none(Eigen::Index joints) {
  return {Vector::Zero(joints), Vector::Zero(joints), 1.0, 1e-3};
}

FrictionModel FrictionModel::coulomb_only(Eigen::Index joints, double coulomb) {
  return {Vector::Constant(joints, coulomb), Vector::Zero(joints), 1.0, 1e-3};
}

void FrictionModel::validate(Eigen::Index joints) const {
  if (coulomb.size() != joints || viscous.size() != joints) {
    throw Error(ErrorCode::DimensionMismatch, "friction parameters must have one entry per joint");
  }
  if ((coulomb.array() < 0.0).any() || (viscous.array() < 0.0).any() ||
      !(stiction_breakaway_ratio >= 1.0) || !(v_eps > 0.0)) {
    throw Error(ErrorCode::BadModel, "friction parameters must be nonnegative, breakaway >= 1");
  }
}

Vector friction_torque(const FrictionModel& model, const Vector& qdot, const Vector& tau_applied) {
  const Eigen::Index n = qdot.size();
  if (tau_applied.size() != n || model.coulomb.size() != n || model.viscous.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "friction inputs must have one entry per joint");
  }
  Vector tau_f(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(qdot(i)) > model.v_eps) {
      const double sign = qdot(i) > 0.0 ? 1.0 : -1.0;
      tau_f(i) = -sign * model.coulomb(i) - model.viscous(i) * qdot(i);
    } else {
      const double hold = model.stiction_breakaway_ratio * model.coulomb(i);
      tau_f(i) = -std::clamp(tau_applied(i), -hold, hold);
    }
  }
  return tau_f;
}

}  // namespace superlimb
