#pragma once

// Dense linear-algebra kernels shared by the kinematics, dynamics and
// stability modules. Everything here is a pure function of its arguments.

#include <Eigen/Dense>

#include <functional>
#include <optional>

namespace superlimb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Full QR of an n x k matrix: m = q * [r; 0].
///
/// q is n x n orthogonal, r is k x k upper triangular with a nonnegative
/// diagonal. The sign convention makes the factorization unique for full
/// column rank inputs.
struct QrFactorization {
  Matrix q;
  Matrix r;
  Eigen::Index k = 0;
  Eigen::Index n = 0;
};

/// Throws RankDeficient when min |r_ii| < 1e-10 * max |r_jj|.
QrFactorization qr_full(const Matrix& m);

/// Moore-Penrose pseudo-inverse via SVD. Singular values at or below
/// max(rows, cols) * sigma_max * 1e-12 are treated as zero.
Matrix svd_pinv(const Matrix& m);

/// Inertia-weighted right inverse A^-1 W^T (W A^-1 W^T)^-1 of a full row rank W.
///
/// Throws SingularWeight if `a` is not symmetric positive definite and
/// RankDeficient if W A^-1 W^T is singular. A W with zero rows yields an
/// n x 0 matrix.
Matrix dyn_consistent_pinv(const Matrix& w, const Matrix& a);

using ScalarField = std::function<double(const Vector&)>;

/// Default per-coordinate central-difference step, 1e-4 * (1 + |p0_i|).
Vector default_fd_step(const Vector& p0);

/// Central-difference Hessian, symmetrized as (H + H^T) / 2.
/// Throws NonFinite if any evaluation of f is not finite.
Matrix finite_diff_hessian(const ScalarField& f, const Vector& p0,
                           std::optional<Vector> step = std::nullopt);

using VectorField = std::function<Vector(const Vector&)>;

/// Central-difference Jacobian of a vector map, rows = outputs.
Matrix finite_diff_jacobian(const VectorField& f, const Vector& p0, double rel_step = 1e-6);

struct PsdResult {
  bool is_psd = false;
  double min_eigenvalue = 0.0;
};

/// Eigenvalue-based semidefiniteness test. Inputs whose asymmetry
/// ||m - m^T||_inf exceeds tol are rejected with NotSymmetric; smaller
/// asymmetry is symmetrized away.
PsdResult psd_check(const Matrix& m, double tol);

/// Ascending eigenvalues of the symmetric part of m.
Vector symmetric_eigenvalues(const Matrix& m);

/// Max row-sum norm.
double inf_norm(const Matrix& m);

bool all_finite(const Matrix& m);

}  // namespace superlimb
