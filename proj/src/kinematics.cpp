#include "superlimb/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "superlimb/error.hpp"

namespace superlimb {
namespace {

void check_partition(const std::vector<int>& a, const std::vector<int>& b, Eigen::Index total,
                     const char* what) {
  std::vector<int> seen(static_cast<size_t>(total), 0);
  for (const auto* part : {&a, &b}) {
    for (int idx : *part) {
      if (idx < 0 || idx >= total) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + " partition index " + std::to_string(idx) + " out of range");
      }
      if (seen[static_cast<size_t>(idx)]++ != 0) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + " partition repeats index " + std::to_string(idx));
      }
    }
  }
  if (a.size() + b.size() != static_cast<size_t>(total)) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " partition does not cover all joints");
  }
}

Vector gather(const Vector& v, const std::vector<int>& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(idx[i]);
  return out;
}

Eigen::Index rank_of(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  const double cutoff = static_cast<double>(std::max(m.rows(), m.cols())) * s(0) * 1e-12;
  return (s.array() > cutoff).count();
}

std::vector<int> iota_indices(Eigen::Index from, Eigen::Index count) {
  std::vector<int> out(static_cast<size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) out[static_cast<size_t>(i)] = static_cast<int>(from + i);
  return out;
}

Matrix assemble_block(const Matrix& j_hat, const Matrix& k) {
  Matrix block = Matrix::Zero(j_hat.rows() + k.rows(), j_hat.cols() + k.cols());
  block.topLeftCorner(j_hat.rows(), j_hat.cols()) = j_hat;
  block.bottomRightCorner(k.rows(), k.cols()) = k;
  return block;
}

Matrix inverse_or_pinv(const Matrix& m) {
  if (m.size() == 0) return Matrix::Zero(m.cols(), m.rows());
  if (m.rows() == m.cols()) return m.partialPivLu().inverse();
  return svd_pinv(m);
}

}  // namespace

Vector CoupledConfig::q_s1() const { return gather(q_s, s1); }
Vector CoupledConfig::q_s2() const { return gather(q_s, s2); }

void CoupledConfig::validate() const {
  if (static_cast<Eigen::Index>(s_types.size()) != q_s.size() ||
      static_cast<Eigen::Index>(h_types.size()) != q_h.size()) {
    throw Error(ErrorCode::DimensionMismatch, "DoF type tags must match joint vector lengths");
  }
  check_partition(s1, s2, q_s.size(), "SRL");
  check_partition(h1, h2, q_h.size(), "human");
  if (k_couple.rows() != static_cast<Eigen::Index>(h2.size()) ||
      k_couple.cols() != static_cast<Eigen::Index>(s2.size())) {
    throw Error(ErrorCode::DimensionMismatch,
                "coupling matrix must be |h2| x |s2| = " + std::to_string(h2.size()) + "x" +
                    std::to_string(s2.size()));
  }
  for (Eigen::Index r = 0; r < k_couple.rows(); ++r) {
    for (Eigen::Index c = 0; c < k_couple.cols(); ++c) {
      if (k_couple(r, c) == 0.0) continue;
      if (h_types[static_cast<size_t>(h2[static_cast<size_t>(r)])] !=
          s_types[static_cast<size_t>(s2[static_cast<size_t>(c)])]) {
        throw Error(ErrorCode::DimensionMismatch,
                    "coupling entry (" + std::to_string(r) + "," + std::to_string(c) +
                        ") mixes rotational and translational DoFs");
      }
    }
  }
  if (rank_of(k_couple) != k_couple.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "coupling matrix must have full row rank");
  }
}

CoupledJacobian make_coupled_jacobian(const Matrix& j_hat, const Matrix& k_couple) {
  CoupledJacobian j;
  j.j_hat = j_hat;
  j.k_couple = k_couple;
  j.block = assemble_block(j_hat, k_couple);
  j.s1 = iota_indices(0, j_hat.cols());
  j.s2 = iota_indices(j_hat.cols(), k_couple.cols());
  j.h1 = iota_indices(0, j_hat.rows());
  j.h2 = iota_indices(j_hat.rows(), k_couple.rows());
  j.s = j.block.cols();
  j.h = j.block.rows();
  return j;
}

CoupledJacobian coupled_jacobian(const CoupledConfig& config, const ForwardMap& fk) {
  config.validate();
  const Vector q_s1 = config.q_s1();
  const auto h1 = static_cast<Eigen::Index>(config.h1.size());

  Matrix j_hat;
  if (fk.jacobian) {
    j_hat = fk.jacobian(q_s1);
  } else if (fk.map) {
    j_hat = finite_diff_jacobian(fk.map, q_s1);
  } else {
    throw Error(ErrorCode::DimensionMismatch, "forward map has neither map nor Jacobian");
  }
  if (j_hat.rows() != h1 || j_hat.cols() != q_s1.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "forward-map Jacobian is " + std::to_string(j_hat.rows()) + "x" +
                    std::to_string(j_hat.cols()) + ", expected " + std::to_string(h1) + "x" +
                    std::to_string(q_s1.size()));
  }

  CoupledJacobian j;
  j.j_hat = j_hat;
  j.k_couple = config.k_couple;
  j.block = assemble_block(j_hat, config.k_couple);
  j.s1 = config.s1;
  j.s2 = config.s2;
  j.h1 = config.h1;
  j.h2 = config.h2;
  j.s = config.q_s.size();
  j.h = config.q_h.size();
  return j;
}

double singularity_guard(const CoupledJacobian& j, double cond_max) {
  if (j.block.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(j.block);
  const Vector& sigma = svd.singularValues();
  const double smax = sigma(0);
  const double smin = sigma(sigma.size() - 1);
  const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(cond <= cond_max)) {
    throw SingularError(cond, "coupled Jacobian condition number " + std::to_string(cond) +
                                  " exceeds " + std::to_string(cond_max));
  }
  return cond;
}

Vector desired_joint_rates(const CoupledJacobian& j, const Vector& qdot_h, double cond_max) {
  if (qdot_h.size() != j.h) {
    throw Error(ErrorCode::DimensionMismatch, "human rate vector has length " +
                                                  std::to_string(qdot_h.size()) + ", expected " +
                                                  std::to_string(j.h));
  }
  if (j.block.rows() > j.block.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "coupled Jacobian has more human than SRL DoFs");
  }
  singularity_guard(j, cond_max);

  const Vector rate_h1 = gather(qdot_h, j.h1);
  const Vector rate_h2 = gather(qdot_h, j.h2);
  const Vector rate_s1 = inverse_or_pinv(j.j_hat) * rate_h1;
  const Vector rate_s2 = inverse_or_pinv(j.k_couple) * rate_h2;

  Vector qdot_s(j.s);
  for (size_t i = 0; i < j.s1.size(); ++i) qdot_s(j.s1[i]) = rate_s1(static_cast<Eigen::Index>(i));
  for (size_t i = 0; i < j.s2.size(); ++i) qdot_s(j.s2[i]) = rate_s2(static_cast<Eigen::Index>(i));
  return qdot_s;
}

Vector desired_joint_positions(const CoupledJacobian& j, const Vector& qdot_h,
                               const Vector& q_s_actual, double dt, double cond_max) {
  if (q_s_actual.size() != j.s) {
    throw Error(ErrorCode::DimensionMismatch, "SRL position vector length");
  }
  return q_s_actual + desired_joint_rates(j, qdot_h, cond_max) * dt;
}

}  // namespace superlimb
