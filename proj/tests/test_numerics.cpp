#include <doctest.h>

#include <cmath>

#include "superlimb/error.hpp"
#include "superlimb/numerics.hpp"
#include "support.hpp"

using namespace superlimb;
using testing::max_abs;

namespace {

Matrix stack_r(const QrFactorization& f) {
  Matrix r0 = Matrix::Zero(f.n, f.k);
  r0.topRows(f.k) = f.r;
  return r0;
}

}  // namespace

TEST_CASE("qr of the identity is the identity") {
  const auto f = qr_full(Matrix::Identity(2, 2));
  CHECK(max_abs(f.r - Matrix::Identity(2, 2)) < 1e-12);
  CHECK(max_abs(f.q.cwiseAbs() - Matrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("qr of a column needing a permutation reconstructs") {
  Matrix m(2, 1);
  m << 0, 1;
  const auto f = qr_full(m);
  CHECK(f.q.rows() == 2);
  CHECK(max_abs(f.q * stack_r(f) - m) < 1e-10);
  CHECK(f.r(0, 0) >= 0.0);
}

TEST_CASE("qr of random tall matrices is orthogonal and reconstructs") {
  testing::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix m = rng.matrix(6, 2);
    const auto f = qr_full(m);
    CHECK(max_abs(f.q.transpose() * f.q - Matrix::Identity(6, 6)) < 1e-12);
    CHECK(max_abs(f.q * stack_r(f) - m) < 1e-12);
    CHECK(f.r.diagonal().minCoeff() >= 0.0);
    CHECK(max_abs(f.r.triangularView<Eigen::StrictlyLower>().toDenseMatrix()) == 0.0);
  }
}

TEST_CASE("qr rejects rank deficient input") {
  Matrix m(3, 2);
  m << 1, 2, 2, 4, 3, 6;
  CHECK_THROWS_AS(qr_full(m), Error);
  try {
    qr_full(m);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficient);
  }
}

TEST_CASE("pinv of an invertible matrix is its inverse") {
  testing::Rng rng(3);
  const Matrix m = rng.spd(4) + rng.matrix(4, 4);
  CHECK(max_abs(svd_pinv(m) - m.inverse()) < 1e-9);
}

TEST_CASE("pinv of zero is zero with transposed shape") {
  const Matrix p = svd_pinv(Matrix::Zero(3, 2));
  CHECK(p.rows() == 2);
  CHECK(p.cols() == 3);
  CHECK(max_abs(p) == 0.0);
}

TEST_CASE("pinv of a rectangular diagonal matrix") {
  Matrix m(2, 3);
  m << 1, 0, 0, 0, 2, 0;
  Matrix expected(3, 2);
  expected << 1, 0, 0, 0.5, 0, 0;
  const Matrix p = svd_pinv(m);
  CHECK(max_abs(p - expected) < 1e-12);
  CHECK(max_abs(m * p * m - m) < 1e-12);
  CHECK(max_abs(p * m * p - p) < 1e-12);
  CHECK(max_abs((m * p).transpose() - m * p) < 1e-12);
  CHECK(max_abs((p * m).transpose() - p * m) < 1e-12);
}

TEST_CASE("Penrose conditions hold on mixed-rank matrices") {
  testing::Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int r = rng.integer(1, 6), c = rng.integer(1, 6);
    const Matrix m = rng.with_rank(r, c, rng.integer(0, std::min(r, c)));
    const Matrix p = svd_pinv(m);
    const double s = 1.0 + max_abs(m);
    CHECK(max_abs(m * p * m - m) <= 1e-9 * s);
    CHECK(max_abs(p * m * p - p) <= 1e-9 * (1.0 + max_abs(p)));
    CHECK(max_abs((m * p).transpose() - m * p) <= 1e-9);
    CHECK(max_abs((p * m).transpose() - p * m) <= 1e-9);
  }
}

TEST_CASE("dynamically consistent inverse with unit weight is the right pseudo-inverse") {
  testing::Rng rng(8);
  const Matrix w = rng.matrix(2, 5);
  const Matrix plain = w.transpose() * (w * w.transpose()).inverse();
  CHECK(max_abs(dyn_consistent_pinv(w, Matrix::Identity(5, 5)) - plain) < 1e-10);
}

TEST_CASE("dynamically consistent inverse of a scalar ignores the weight") {
  const Matrix w = Matrix::Constant(1, 1, 2.0);
  const Matrix a = Matrix::Constant(1, 1, 4.0);
  CHECK(dyn_consistent_pinv(w, a)(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("dynamically consistent inverse is a right inverse") {
  testing::Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix w = rng.matrix(2, 5);
    const Matrix a = rng.spd(5);
    CHECK(max_abs(w * dyn_consistent_pinv(w, a) - Matrix::Identity(2, 2)) < 1e-9);
  }
}

TEST_CASE("dynamically consistent inverse error paths") {
  testing::Rng rng(10);
  Matrix a = rng.spd(3);
  Matrix not_spd = -Matrix::Identity(3, 3);
  try {
    dyn_consistent_pinv(rng.matrix(1, 3), not_spd);
    FAIL("expected SingularWeight");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularWeight);
  }
  Matrix dependent(2, 3);
  dependent << 1, 2, 3, 2, 4, 6;
  try {
    dyn_consistent_pinv(dependent, a);
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficient);
  }
  const Matrix empty = dyn_consistent_pinv(Matrix::Zero(0, 3), a);
  CHECK(empty.rows() == 3);
  CHECK(empty.cols() == 0);
}

TEST_CASE("finite difference Hessian of a quadratic") {
  testing::Rng rng(12);
  Matrix m = rng.matrix(4, 4);
  m = (0.5 * (m + m.transpose())).eval();
  const Vector p0 = rng.vector(4);
  const Matrix h = finite_diff_hessian([&](const Vector& p) { return p.dot(m * p); }, p0);
  CHECK(max_abs(h - 2.0 * m) <= 1e-5 * max_abs(2.0 * m));
}

TEST_CASE("finite difference Hessian of a constant is zero") {
  const Matrix h = finite_diff_hessian([](const Vector&) { return 3.5; }, Vector::Ones(3));
  CHECK(max_abs(h) == 0.0);
}

TEST_CASE("finite difference Hessian of sin(p1) p2") {
  Vector p0(2);
  p0 << 0.0, 1.0;
  const Matrix h = finite_diff_hessian([](const Vector& p) { return std::sin(p(0)) * p(1); }, p0);
  Matrix expected(2, 2);
  expected << 0, 1, 1, 0;
  CHECK(max_abs(h - expected) < 1e-5);
  CHECK(max_abs(h - h.transpose()) == 0.0);
}

TEST_CASE("finite difference Hessian reports non-finite evaluations") {
  try {
    finite_diff_hessian([](const Vector& p) { return std::sqrt(p(0)); }, Vector::Zero(1));
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
}

TEST_CASE("finite difference Jacobian of a linear map") {
  testing::Rng rng(13);
  const Matrix m = rng.matrix(3, 4);
  const Matrix j = finite_diff_jacobian([&](const Vector& p) { return Vector(m * p); }, rng.vector(4));
  CHECK(max_abs(j - m) < 1e-8);
}

TEST_CASE("psd check examples") {
  auto r = psd_check(Matrix::Identity(3, 3), 1e-9);
  CHECK(r.is_psd);
  CHECK(r.min_eigenvalue == doctest::Approx(1.0));

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = -1;
  r = psd_check(d, 1e-9);
  CHECK_FALSE(r.is_psd);
  CHECK(r.min_eigenvalue == doctest::Approx(-1.0));

  Matrix s(2, 2);
  s << 2, 1, 1, 2;
  r = psd_check(s, 1e-9);
  CHECK(r.is_psd);
  CHECK(r.min_eigenvalue == doctest::Approx(1.0));
}

TEST_CASE("psd check rejects asymmetric input beyond tolerance") {
  Matrix m(2, 2);
  m << 1, 1, 0, 1;
  try {
    psd_check(m, 1e-9);
    FAIL("expected NotSymmetric");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSymmetric);
  }
  // tiny asymmetry is symmetrized away
  m << 1, 1e-12, 0, 1;
  CHECK(psd_check(m, 1e-9).is_psd);
}

TEST_CASE("psd verdict is invariant to positive scaling") {
  testing::Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix m = rng.matrix(4, 4);
    m = (m + m.transpose()).eval();
    const double s = std::pow(10.0, rng.uniform(-3, 3));
    CHECK(psd_check(m, 1e-9 * inf_norm(m)).is_psd == psd_check(s * m, 1e-9 * inf_norm(s * m)).is_psd);
  }
}
