#include "superlimb/dynamics.hpp"

#include <string>

#include "superlimb/error.hpp"

namespace superlimb {

void DynamicsSnapshot::validate() const {
  const Eigen::Index dofs = a.rows();
  if (a.cols() != dofs || h_bias.size() != dofs || qdd.size() != dofs || j_c.cols() != dofs) {
    throw Error(ErrorCode::DimensionMismatch, "dynamics snapshot blocks have inconsistent sizes");
  }
  if (j_c.rows() < 1 || j_c.rows() > dofs) {
    throw Error(ErrorCode::DimensionMismatch,
                "contact DoF count " + std::to_string(j_c.rows()) + " outside 1.." +
                    std::to_string(dofs));
  }
  if (!a.allFinite() || !h_bias.allFinite() || !j_c.allFinite() || !qdd.allFinite()) {
    throw Error(ErrorCode::NonFinite, "dynamics snapshot has non-finite entries");
  }
}

SelectionMatrices selection_matrices(Eigen::Index k, Eigen::Index n) {
  if (k < 0 || n < 1 || k > n) {
    throw Error(ErrorCode::DimensionMismatch,
                "selection matrices need 0 <= k <= n, got k=" + std::to_string(k) +
                    " n=" + std::to_string(n));
  }
  SelectionMatrices s{Matrix::Zero(k, n), Matrix::Zero(n - k, n)};
  s.s_k.leftCols(k).setIdentity();
  s.s_kc.rightCols(n - k).setIdentity();
  return s;
}

Matrix null_projection(const Matrix& s_kc_qt, const Matrix& a) {
  const Eigen::Index n = a.rows();
  if (s_kc_qt.cols() != n) throw Error(ErrorCode::DimensionMismatch, "null_projection sizes");
  const Matrix w_dag = dyn_consistent_pinv(s_kc_qt, a);
  return Matrix::Identity(n, n) - w_dag * s_kc_qt;
}

DecoupledSolution decouple(const DynamicsSnapshot& snapshot) {
  snapshot.validate();
  const Eigen::Index n = snapshot.n();
  const Eigen::Index k = snapshot.k();

  const QrFactorization qr = qr_full(snapshot.j_c.transpose());
  const SelectionMatrices sel = selection_matrices(k, n);
  const Matrix qt = qr.q.transpose();
  const Matrix w = sel.s_kc * qt;
  const Vector b = snapshot.a * snapshot.qdd + snapshot.h_bias;

  const Matrix w_dag = dyn_consistent_pinv(w, snapshot.a);
  const Matrix n_kc = Matrix::Identity(n, n) - w_dag * w;

  DecoupledSolution sol;
  sol.tau = w_dag * (w * b);
  sol.lambda = qr.r.triangularView<Eigen::Upper>().solve(sel.s_k * qt * (n_kc * b));
  sol.n_kc = n_kc;
  sol.q = qr.q;
  sol.r = qr.r;
  sol.unique = (k == n);
  return sol;
}

double decouple_residual(const DynamicsSnapshot& snapshot, const DecoupledSolution& sol) {
  const Vector res = snapshot.a * snapshot.qdd + snapshot.h_bias - sol.tau -
                     snapshot.j_c.transpose() * sol.lambda;
  return res.cwiseAbs().maxCoeff();
}

}  // namespace superlimb
