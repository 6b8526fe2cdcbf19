#pragma once

// Quasi-static stability of a body held by a servo-stiff support chain.
//
// The supported body has pose p (x, y, z, roll, pitch, yaw; fixed-axis XYZ
// angles). The chain's joint coordinates follow q = ik(p) and the body's CoM
// height is z_c(p). With joint control tau = tau_bar - K_q (q - q_bar) the
// potential
//
//     U(p) = m g z_c(p) - tau_bar^T dq + 1/2 dq^T K_q dq,   dq = ik(p) - q_bar
//
// has Hessian at the equilibrium p_bar
//
//     K_p = m g E_z + J^T K_q J - sum_i tau_bar_i H_i
//
// with E_z and H_i the Hessians of z_c and q_i. The posture is stable when
// K_p is positive semidefinite.

#include <Eigen/Geometry>

#include <functional>
#include <optional>
#include <vector>

#include "superlimb/numerics.hpp"

namespace superlimb {

inline constexpr double kGravity = 9.81;

struct SupportPosture {
  Vector p_bar;    // 6
  Vector q_bar;    // joint coordinates at p_bar
  Vector tau_bar;  // joint torques at p_bar
  Matrix k_q;      // joint servo stiffness
  double mass = 1.0;
  double gravity = kGravity;
  VectorField ik_map;
  ScalarField z_of_p;

  // Optional analytic derivatives; numeric differentiation is used otherwise.
  std::function<Matrix(const Vector&)> ik_jacobian;
  std::function<Matrix(const Vector&)> z_hessian;
  std::function<Matrix(const Vector&, int)> q_hessian;

  Eigen::Index joints() const { return q_bar.size(); }
  /// Sizes, symmetry/PSD of k_q and mass > 0. Throws DimensionMismatch / BadModel.
  void validate() const;
};

/// Joint coordinates at p. Throws IkFailure for non-finite or missing results.
Vector evaluate_ik(const SupportPosture& posture, const Vector& p);

/// Jacobian dq/dp at p.
Matrix ik_jacobian(const SupportPosture& posture, const Vector& p);

/// Gradient of z_c at p.
Vector height_gradient(const SupportPosture& posture, const Vector& p);

/// F_h + J^T tau_bar - m g grad z_c at p_bar: the net generalized force on
/// the body, zero at a static equilibrium.
Vector equilibrium_residual(const SupportPosture& posture, const Vector& f_h);

double potential(const SupportPosture& posture, const Vector& p);

Matrix hessian_ez(const SupportPosture& posture, const Vector& p);
Matrix hessian_qi(const SupportPosture& posture, const Vector& p, int i);

/// Joint torques balancing gravity at p_bar, i.e. the least-squares solution
/// of J^T tau = m g grad z_c.
Vector equilibrium_torque(const SupportPosture& posture);

struct StabilityReport {
  Matrix k_p;
  Vector eigenvalues;  // ascending
  bool is_stable = false;
  double margin = 0.0;  // smallest eigenvalue
  double tolerance = 0.0;
  Matrix k_p_oracle;    // finite-difference Hessian of U at p_bar
  double oracle_rel_error = 0.0;
  bool diagnostic_mismatch = false;
  double residual_norm = 0.0;
};

/// Three-term assembly of K_p at p_bar, without verdict or cross-check.
Matrix assemble_kp(const SupportPosture& posture);

/// Assembles K_p, runs the PSD test with tol = 1e-8 ||K_p||_inf and
/// cross-checks against the finite-difference Hessian of U (mismatch above
/// 1e-3 relative is flagged and logged).
StabilityReport stiffness_matrix_kp(const SupportPosture& posture);

/// Smallest alpha such that K_q = alpha I gives min eig(K_p) >= margin, found
/// by bisection to 1e-6. Throws Unachievable if alpha_max is not enough.
double stabilizing_servo_stiffness(const SupportPosture& posture, double margin,
                                   double alpha_max = 1e6);

// Parametric support chains, used by the CLI and tests.

/// Joint coordinate definition in terms of the body pose.
struct SupportJoint {
  enum class Kind {
    Pose,      // q = scale * p[index]
    Distance,  // q = |body point - anchor| (prismatic leg)
    Angle,     // q = atan2(dz, dx) of body point - anchor (revolute pivot in the x-z plane)
  };
  Kind kind = Kind::Pose;
  int index = 0;
  double scale = 1.0;
  Eigen::Vector3d anchor = Eigen::Vector3d::Zero();  // world frame
  Eigen::Vector3d attach = Eigen::Vector3d::Zero();  // body frame
};

struct ParametricSupport {
  std::vector<SupportJoint> joints;
  Eigen::Vector3d com_offset = Eigen::Vector3d::Zero();  // body frame
  double mass = 1.0;
  double gravity = kGravity;
  Vector p_bar = Vector::Zero(6);
  Matrix k_q;                       // joints x joints
  std::optional<Vector> tau_bar;    // equilibrium torque when absent
};

/// Rotation for fixed-axis XYZ angles (roll about x, then pitch about y, then yaw about z).
Eigen::Matrix3d rotation_xyz(double roll, double pitch, double yaw);

SupportPosture make_posture(const ParametricSupport& support);

}  // namespace superlimb
