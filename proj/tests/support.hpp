#pragma once
// Shared helpers for the unit tests: seeded generators and comparisons.
#include <cmath>
#include <cstdint>
#include <random>

#include "critfish/linalg.hpp"

namespace testing {

using critfish::DensityMatrix;
using critfish::Matrix;
using critfish::SymmetricMatrix;
using critfish::Vector;

inline double rel_err(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Matrix matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = uniform();
    return m;
  }

  SymmetricMatrix symmetric(int dim, double scale = 1.0) { return SymmetricMatrix(scale * matrix(dim, dim)); }

  // Random orthogonal matrix from a QR factorization.
  Matrix orthogonal(int dim) {
    Eigen::HouseholderQR<Matrix> qr(matrix(dim, dim));
    return qr.householderQ() * Matrix::Identity(dim, dim);
  }

  Vector probabilities(int dim) {
    Vector p(dim);
    for (int i = 0; i < dim; ++i) p(i) = uniform(0.0, 1.0);
    return p / p.sum();
  }

  Vector unit_vector(int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = uniform();
    return v.normalized();
  }

  DensityMatrix density(int dim) { return DensityMatrix(probabilities(dim), orthogonal(dim)); }

  // Projector onto a random subspace of the given rank.
  SymmetricMatrix projector(int dim, int rank) {
    const Matrix q = orthogonal(dim).leftCols(rank);
    return SymmetricMatrix(q * q.transpose());
  }

 private:
  std::mt19937_64 rng_;
};

inline DensityMatrix pure(const Vector& psi) { return DensityMatrix(SymmetricMatrix(psi * psi.transpose())); }

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing
