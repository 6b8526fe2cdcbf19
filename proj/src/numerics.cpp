#include "superlimb/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "superlimb/error.hpp"

namespace superlimb {

double inf_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

QrFactorization qr_full(const Matrix& m) {
  const Eigen::Index n = m.rows();
  const Eigen::Index k = m.cols();
  if (k < 1 || n < k) {
    throw Error(ErrorCode::DimensionMismatch,
                "qr_full needs n >= k >= 1, got " + std::to_string(n) + "x" + std::to_string(k));
  }
  if (!m.allFinite()) throw Error(ErrorCode::NonFinite, "qr_full input has non-finite entries");

  Eigen::HouseholderQR<Matrix> qr(m);
  QrFactorization out;
  out.n = n;
  out.k = k;
  out.q = qr.householderQ() * Matrix::Identity(n, n);
  out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

  for (Eigen::Index i = 0; i < k; ++i) {
    if (out.r(i, i) < 0.0) {
      out.r.row(i) *= -1.0;
      out.q.col(i) *= -1.0;
    }
  }

  const Vector diag = out.r.diagonal().cwiseAbs();
  const double largest = diag.maxCoeff();
  const double smallest = diag.minCoeff();
  if (!(largest > 0.0) || smallest < 1e-10 * largest) {
    throw Error(ErrorCode::RankDeficient, "matrix has numerical rank below its column count " +
                                              std::to_string(k));
  }
  return out;
}

Matrix svd_pinv(const Matrix& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  if (m.size() == 0) return Matrix::Zero(cols, rows);

  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double cutoff = static_cast<double>(std::max(rows, cols)) * sigma_max * 1e-12;

  Vector inv = Vector::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) inv(i) = 1.0 / sigma(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Matrix dyn_consistent_pinv(const Matrix& w, const Matrix& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || w.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "dyn_consistent_pinv: W is " +
                                                  std::to_string(w.rows()) + "x" +
                                                  std::to_string(w.cols()) + ", A is " +
                                                  std::to_string(a.rows()) + "x" +
                                                  std::to_string(a.cols()));
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw Error(ErrorCode::SingularWeight, "weight matrix is not symmetric");
  }
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularWeight, "weight matrix is not positive definite");
  }
  if (w.rows() == 0) return Matrix::Zero(n, 0);

  const Matrix a_inv_wt = llt.solve(w.transpose());
  const Matrix gram = w * a_inv_wt;
  Eigen::LDLT<Matrix> ldlt(gram);
  const Vector d = ldlt.vectorD().cwiseAbs();
  if (ldlt.info() != Eigen::Success || d.minCoeff() <= 1e-12 * std::max(1e-300, d.maxCoeff())) {
    throw Error(ErrorCode::RankDeficient, "W A^-1 W^T is singular");
  }
  return ldlt.solve(a_inv_wt.transpose()).transpose();
}

Vector default_fd_step(const Vector& p0) {
  return (1e-4 * (Vector::Ones(p0.size()) + p0.cwiseAbs())).eval();
}

Matrix finite_diff_hessian(const ScalarField& f, const Vector& p0, std::optional<Vector> step) {
  const Eigen::Index d = p0.size();
  const Vector h = step ? *step : default_fd_step(p0);
  if (h.size() != d) throw Error(ErrorCode::DimensionMismatch, "step size vector length");
  if ((h.array() <= 0.0).any()) throw Error(ErrorCode::DimensionMismatch, "step sizes must be > 0");

  auto eval = [&](const Vector& p) {
    const double v = f(p);
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "function value is not finite");
    return v;
  };

  const double f0 = eval(p0);
  Matrix hess(d, d);
  Vector p = p0;
  for (Eigen::Index i = 0; i < d; ++i) {
    p(i) = p0(i) + h(i);
    const double fp = eval(p);
    p(i) = p0(i) - h(i);
    const double fm = eval(p);
    p(i) = p0(i);
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h(i) * h(i));

    for (Eigen::Index j = i + 1; j < d; ++j) {
      double acc = 0.0;
      for (const auto& [si, sj] : {std::pair{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}}) {
        p(i) = p0(i) + si * h(i);
        p(j) = p0(j) + sj * h(j);
        acc += si * sj * eval(p);
      }
      p(i) = p0(i);
      p(j) = p0(j);
      hess(i, j) = hess(j, i) = acc / (4.0 * h(i) * h(j));
    }
  }
  return 0.5 * (hess + hess.transpose());
}

Matrix finite_diff_jacobian(const VectorField& f, const Vector& p0, double rel_step) {
  const Vector f0 = f(p0);
  Matrix jac(f0.size(), p0.size());
  Vector p = p0;
  for (Eigen::Index j = 0; j < p0.size(); ++j) {
    const double h = rel_step * (1.0 + std::abs(p0(j)));
    p(j) = p0(j) + h;
    const Vector fp = f(p);
    p(j) = p0(j) - h;
    const Vector fm = f(p);
    p(j) = p0(j);
    if (fp.size() != f0.size() || fm.size() != f0.size()) {
      throw Error(ErrorCode::DimensionMismatch, "vector map changed output size");
    }
    jac.col(j) = (fp - fm) / (2.0 * h);
  }
  if (!jac.allFinite()) throw Error(ErrorCode::NonFinite, "Jacobian has non-finite entries");
  return jac;
}

Vector symmetric_eigenvalues(const Matrix& m) {
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

PsdResult psd_check(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "psd_check needs a nonempty square matrix");
  }
  if (!m.allFinite()) throw Error(ErrorCode::NonFinite, "psd_check input has non-finite entries");
  if (inf_norm(m - m.transpose()) > tol) {
    throw Error(ErrorCode::NotSymmetric, "asymmetry exceeds tolerance");
  }
  const double min_eig = symmetric_eigenvalues(m)(0);
  return {min_eig >= -tol, min_eig};
}

}  // namespace superlimb
