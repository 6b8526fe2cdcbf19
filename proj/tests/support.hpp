#pragma once

#include <cstdint>
#include <random>

#include "superlimb/numerics.hpp"

namespace testing {

using superlimb::Matrix;
using superlimb::Vector;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  Matrix matrix(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = uniform();
    return m;
  }
  Vector vector(Eigen::Index n) { return matrix(n, 1).col(0); }

  // Well conditioned symmetric positive definite matrix.
  Matrix spd(Eigen::Index n) {
    const Matrix b = matrix(n, n);
    return b * b.transpose() + static_cast<double>(n) * Matrix::Identity(n, n);
  }

  // rows x cols with the requested rank.
  Matrix with_rank(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank) {
    if (rank == 0) return Matrix::Zero(rows, cols);
    return matrix(rows, rank) * matrix(rank, cols);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace testing
