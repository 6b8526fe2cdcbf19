#include "superlimb/stability.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "superlimb/error.hpp"
#include "superlimb/log.hpp"

namespace superlimb {

void SupportPosture::validate() const {
  if (p_bar.size() != 6) throw Error(ErrorCode::DimensionMismatch, "pose must have 6 coordinates");
  const Eigen::Index nq = q_bar.size();
  if (tau_bar.size() != nq || k_q.rows() != nq || k_q.cols() != nq) {
    throw Error(ErrorCode::DimensionMismatch, "q_bar, tau_bar and K_q sizes disagree");
  }
  if (!(mass > 0.0)) throw Error(ErrorCode::BadModel, "supported mass must be positive");
  if (!ik_map || !z_of_p) throw Error(ErrorCode::BadModel, "posture needs ik_map and z_of_p");
  const double tol = 1e-9 * std::max(1.0, inf_norm(k_q));
  if (nq > 0 && !psd_check(k_q, tol).is_psd) {
    throw Error(ErrorCode::BadModel, "joint servo stiffness must be positive semidefinite");
  }
}

Vector evaluate_ik(const SupportPosture& posture, const Vector& p) {
  Vector q;
  try {
    q = posture.ik_map(p);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::IkFailure, e.what());
  }
  if (q.size() != posture.q_bar.size()) {
    throw Error(ErrorCode::IkFailure, "inverse kinematics returned " + std::to_string(q.size()) +
                                          " joints, expected " +
                                          std::to_string(posture.q_bar.size()));
  }
  if (!q.allFinite()) throw Error(ErrorCode::IkFailure, "inverse kinematics is not finite");
  return q;
}

Matrix ik_jacobian(const SupportPosture& posture, const Vector& p) {
  if (posture.ik_jacobian) return posture.ik_jacobian(p);
  return finite_diff_jacobian([&](const Vector& x) { return evaluate_ik(posture, x); }, p);
}

Vector height_gradient(const SupportPosture& posture, const Vector& p) {
  const Matrix g = finite_diff_jacobian(
      [&](const Vector& x) { return Vector::Constant(1, posture.z_of_p(x)); }, p);
  return g.row(0).transpose();
}

Vector equilibrium_residual(const SupportPosture& posture, const Vector& f_h) {
  if (f_h.size() != 6) throw Error(ErrorCode::DimensionMismatch, "human force must be a 6-vector");
  const Matrix j = ik_jacobian(posture, posture.p_bar);
  return f_h + j.transpose() * posture.tau_bar -
         posture.mass * posture.gravity * height_gradient(posture, posture.p_bar);
}

double potential(const SupportPosture& posture, const Vector& p) {
  const Vector dq = evaluate_ik(posture, p) - posture.q_bar;
  return posture.mass * posture.gravity * posture.z_of_p(p) - posture.tau_bar.dot(dq) +
         0.5 * dq.dot(posture.k_q * dq);
}

Matrix hessian_ez(const SupportPosture& posture, const Vector& p) {
  if (posture.z_hessian) return posture.z_hessian(p);
  return finite_diff_hessian(posture.z_of_p, p);
}

Matrix hessian_qi(const SupportPosture& posture, const Vector& p, int i) {
  if (i < 0 || i >= posture.joints()) {
    throw Error(ErrorCode::DimensionMismatch, "joint index " + std::to_string(i) + " out of range");
  }
  if (posture.q_hessian) return posture.q_hessian(p, i);
  return finite_diff_hessian([&](const Vector& x) { return evaluate_ik(posture, x)(i); }, p);
}

Vector equilibrium_torque(const SupportPosture& posture) {
  const Matrix j = ik_jacobian(posture, posture.p_bar);
  return svd_pinv(j.transpose()) * (posture.mass * posture.gravity * height_gradient(posture, posture.p_bar));
}

namespace {

// Everything in K_p that does not depend on K_q.
Matrix kp_without_servo(const SupportPosture& posture) {
  Matrix kp = posture.mass * posture.gravity * hessian_ez(posture, posture.p_bar);
  for (int i = 0; i < posture.joints(); ++i) {
    if (posture.tau_bar(i) != 0.0) kp -= posture.tau_bar(i) * hessian_qi(posture, posture.p_bar, i);
  }
  return kp;
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

Matrix assemble_kp(const SupportPosture& posture) {
  posture.validate();
  const Matrix j = ik_jacobian(posture, posture.p_bar);
  return symmetrized(kp_without_servo(posture) + j.transpose() * posture.k_q * j);
}

StabilityReport stiffness_matrix_kp(const SupportPosture& posture) {
  StabilityReport report;
  report.k_p = assemble_kp(posture);
  report.residual_norm = equilibrium_residual(posture, Vector::Zero(6)).cwiseAbs().maxCoeff();
  if (report.residual_norm > 1e-6) {
    log::warn("posture is off equilibrium, residual " + std::to_string(report.residual_norm) + " N");
  }

  report.tolerance = 1e-8 * inf_norm(report.k_p);
  const PsdResult psd = psd_check(report.k_p, report.tolerance);
  report.eigenvalues = symmetric_eigenvalues(report.k_p);
  report.is_stable = psd.is_psd;
  report.margin = psd.min_eigenvalue;

  report.k_p_oracle = finite_diff_hessian([&](const Vector& p) { return potential(posture, p); },
                                          posture.p_bar);
  const double scale = std::max(report.k_p.cwiseAbs().maxCoeff(), report.k_p_oracle.cwiseAbs().maxCoeff());
  const double diff = (report.k_p - report.k_p_oracle).cwiseAbs().maxCoeff();
  report.oracle_rel_error = scale > 0.0 ? diff / scale : 0.0;
  report.diagnostic_mismatch = report.oracle_rel_error > 1e-3;
  if (report.diagnostic_mismatch) {
    log::warn("DiagnosticMismatch: K_p differs from the potential Hessian by " +
              std::to_string(report.oracle_rel_error) + " relative");
  }
  return report;
}

double stabilizing_servo_stiffness(const SupportPosture& posture, double margin, double alpha_max) {
  posture.validate();
  const Matrix j = ik_jacobian(posture, posture.p_bar);
  const Matrix jtj = j.transpose() * j;
  if (Eigen::FullPivLU<Matrix>(jtj).rank() < jtj.rows()) {
    throw Error(ErrorCode::Unachievable, "J^T J is rank deficient; servo stiffness cannot stiffen every direction");
  }
  const Matrix base = kp_without_servo(posture);
  auto min_eig = [&](double alpha) { return symmetric_eigenvalues(symmetrized(base + alpha * jtj))(0); };

  if (min_eig(0.0) >= margin) return 0.0;
  if (min_eig(alpha_max) < margin) {
    throw Error(ErrorCode::Unachievable,
                "servo stiffness up to " + std::to_string(alpha_max) + " cannot reach the margin");
  }
  double lo = 0.0;
  double hi = alpha_max;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (min_eig(mid) >= margin ? hi : lo) = mid;
  }
  return hi;
}

Eigen::Matrix3d rotation_xyz(double roll, double pitch, double yaw) {
  return (Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

namespace {

Eigen::Vector3d body_point(const Vector& p, const Eigen::Vector3d& local) {
  return p.head<3>() + rotation_xyz(p(3), p(4), p(5)) * local;
}

}  // namespace

SupportPosture make_posture(const ParametricSupport& support) {
  const auto nq = static_cast<Eigen::Index>(support.joints.size());
  for (const auto& jt : support.joints) {
    if (jt.kind == SupportJoint::Kind::Pose && (jt.index < 0 || jt.index > 5)) {
      throw Error(ErrorCode::DimensionMismatch, "pose joint index must be in 0..5");
    }
  }
  if (support.p_bar.size() != 6) throw Error(ErrorCode::DimensionMismatch, "p_bar must have 6 entries");

  SupportPosture posture;
  posture.p_bar = support.p_bar;
  posture.mass = support.mass;
  posture.gravity = support.gravity;
  posture.k_q = support.k_q.size() == 0 ? Matrix::Zero(nq, nq) : support.k_q;

  const auto joints = support.joints;
  posture.ik_map = [joints](const Vector& p) {
    Vector q(static_cast<Eigen::Index>(joints.size()));
    for (size_t i = 0; i < joints.size(); ++i) {
      const auto& jt = joints[i];
      const auto qi = static_cast<Eigen::Index>(i);
      switch (jt.kind) {
        case SupportJoint::Kind::Pose:
          q(qi) = jt.scale * p(jt.index);
          break;
        case SupportJoint::Kind::Distance:
          q(qi) = (body_point(p, jt.attach) - jt.anchor).norm();
          break;
        case SupportJoint::Kind::Angle: {
          const Eigen::Vector3d d = body_point(p, jt.attach) - jt.anchor;
          if (std::hypot(d.x(), d.z()) < 1e-12) {
            throw Error(ErrorCode::IkFailure, "pivot angle undefined at the anchor");
          }
          q(qi) = std::atan2(d.z(), d.x());
          break;
        }
      }
    }
    return q;
  };
  const Eigen::Vector3d com = support.com_offset;
  posture.z_of_p = [com](const Vector& p) { return body_point(p, com).z(); };

  posture.q_bar = Vector::Zero(nq);
  posture.tau_bar = Vector::Zero(nq);
  posture.q_bar = evaluate_ik(posture, posture.p_bar);
  posture.tau_bar = support.tau_bar ? *support.tau_bar : equilibrium_torque(posture);
  posture.validate();
  return posture;
}

}  // namespace superlimb
