#pragma once

// Contact-constrained dynamics A qdd + h = tau + J_c^T lambda, split into
// joint torques and support force through a QR factorization of J_c^T.

#include "superlimb/numerics.hpp"

namespace superlimb {

/// Inertia, bias and contact Jacobian at one instant.
struct DynamicsSnapshot {
  Matrix a;       // n x n, symmetric positive definite
  Vector h_bias;  // n
  Matrix j_c;     // k x n
  Vector qdd;     // n

  Eigen::Index n() const { return a.rows(); }
  Eigen::Index k() const { return j_c.rows(); }
  /// Throws DimensionMismatch / NonFinite / SingularWeight.
  void validate() const;
};

/// One feasible (tau, lambda) pair; the split is not unique.
struct DecoupledSolution {
  Vector tau;     // n, ordered like the snapshot's joints
  Vector lambda;  // k, contact force acting on the system
  Matrix n_kc;    // n x n null projection
  Matrix q;       // QR factors of J_c^T
  Matrix r;
  bool unique = false;
};

struct SelectionMatrices {
  Matrix s_k;   // k x n, [I_k 0]
  Matrix s_kc;  // (n-k) x n, [0 I_{n-k}]
};

SelectionMatrices selection_matrices(Eigen::Index k, Eigen::Index n);

/// N_kc = I - W^dagger W with the A-weighted pseudo-inverse of W = S_kc Q^T.
/// A W with no rows gives the identity.
Matrix null_projection(const Matrix& s_kc_qt, const Matrix& a);

/// tau = W^dagger W (A qdd + h) and lambda = R^-1 S_k Q^T N_kc (A qdd + h)
/// with W = S_kc Q^T and J_c^T = Q [R; 0].
DecoupledSolution decouple(const DynamicsSnapshot& snapshot);

/// ||A qdd + h - tau - J_c^T lambda||_inf.
double decouple_residual(const DynamicsSnapshot& snapshot, const DecoupledSolution& sol);

}  // namespace superlimb
