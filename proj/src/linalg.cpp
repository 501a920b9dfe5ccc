#include "critfish/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "critfish/error.hpp"

namespace critfish {

SymmetricMatrix::SymmetricMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw Error(Errc::InvalidDimension, "symmetric matrix must be square with dim >= 1");
  }
  m_ = (m + m.transpose()) * 0.5;
}

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index dim) {
  return SymmetricMatrix(Matrix::Identity(dim, dim));
}

SymmetricMatrix SymmetricMatrix::diagonal(const Vector& d) {
  return SymmetricMatrix(Matrix(d.asDiagonal()));
}

double SymmetricMatrix::max_abs() const { return m_.cwiseAbs().maxCoeff(); }

SymmetricMatrix SymmetricMatrix::operator+(const SymmetricMatrix& o) const {
  if (o.dim() != dim()) throw Error(Errc::DimMismatch, "matrix sum");
  return SymmetricMatrix(m_ + o.m_);
}

SymmetricMatrix SymmetricMatrix::operator-(const SymmetricMatrix& o) const {
  if (o.dim() != dim()) throw Error(Errc::DimMismatch, "matrix difference");
  return SymmetricMatrix(m_ - o.m_);
}

SymmetricMatrix SymmetricMatrix::operator*(double s) const { return SymmetricMatrix(m_ * s); }

SymmetricMatrix SymmetricMatrix::squared() const { return SymmetricMatrix(m_ * m_); }

double Spectrum::scale() const {
  const double s = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  return s > 0.0 ? s : 1.0;
}

namespace {

// Connected components of the nonzero pattern, each listed in index order.
std::vector<std::vector<Eigen::Index>> components(const Matrix& m) {
  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> label(n, -1);
  std::vector<std::vector<Eigen::Index>> out;
  std::vector<Eigen::Index> stack;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    const auto id = static_cast<Eigen::Index>(out.size());
    out.emplace_back();
    label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const Eigen::Index i = stack.back();
      stack.pop_back();
      out.back().push_back(i);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (label[j] < 0 && m(i, j) != 0.0) {
          label[j] = id;
          stack.push_back(j);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

void fix_signs(Matrix& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    const double top = v.col(c).cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      if (std::abs(v(r, c)) >= top * (1.0 - 1e-12)) {
        if (v(r, c) < 0.0) v.col(c) *= -1.0;
        break;
      }
    }
  }
}

}  // namespace

Spectrum eigh(const SymmetricMatrix& sm) {
  const Matrix& m = sm.matrix();
  if (!m.allFinite()) throw Error(Errc::InvalidMatrix, "non-finite entries");
  const Eigen::Index n = m.rows();

  struct Pair {
    double value;
    Eigen::Index block;
    Eigen::Index local;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  const auto blocks = components(m);
  std::vector<Matrix> block_vectors(blocks.size());
  std::vector<Vector> block_values(blocks.size());

  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& idx = blocks[b];
    const auto k = static_cast<Eigen::Index>(idx.size());
    if (k == 1) {
      block_values[b] = Vector::Constant(1, m(idx[0], idx[0]));
      block_vectors[b] = Matrix::Ones(1, 1);
    } else {
      Matrix sub(k, k);
      for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = m(idx[i], idx[j]);
      Eigen::SelfAdjointEigenSolver<Matrix> solver(sub);
      if (solver.info() != Eigen::Success) {
        throw Error(Errc::InvalidMatrix, "eigensolver did not converge");
      }
      block_values[b] = solver.eigenvalues();
      block_vectors[b] = solver.eigenvectors();
    }
    for (Eigen::Index i = 0; i < k; ++i) {
      pairs.push_back({block_values[b](i), static_cast<Eigen::Index>(b), i});
    }
  }

  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& a, const Pair& b) { return a.value < b.value; });

  Spectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto& p = pairs[static_cast<std::size_t>(c)];
    out.eigenvalues(c) = p.value;
    const auto& idx = blocks[static_cast<std::size_t>(p.block)];
    const Matrix& bv = block_vectors[static_cast<std::size_t>(p.block)];
    for (std::size_t r = 0; r < idx.size(); ++r) {
      out.eigenvectors(idx[r], c) = bv(static_cast<Eigen::Index>(r), p.local);
    }
  }
  fix_signs(out.eigenvectors);
  return out;
}

SymmetricMatrix psd_sqrt(const SymmetricMatrix& m) {
  const Spectrum s = eigh(m);
  const double norm = s.eigenvalues.cwiseAbs().maxCoeff();
  // eigenvalues this close to zero are eigensolver roundoff; their square
  // roots would otherwise show up at the 1e-8 level
  const double noise = static_cast<double>(s.dim()) * std::numeric_limits<double>::epsilon() * norm;
  Vector root(s.dim());
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    const double lambda = s.eigenvalues(i);
    if (lambda < -1e-10 * norm) {
      throw Error(Errc::NotPSD, "eigenvalue " + std::to_string(lambda) + " below clamp floor");
    }
    root(i) = lambda > noise ? std::sqrt(lambda) : 0.0;
  }
  return SymmetricMatrix(s.eigenvectors * root.asDiagonal() * s.eigenvectors.transpose());
}

DensityMatrix::DensityMatrix(const SymmetricMatrix& rho) {
  const double trace = rho.matrix().trace();
  if (std::abs(trace - 1.0) > 1e-12) {
    throw Error(Errc::InvalidMatrix, "density matrix trace " + std::to_string(trace));
  }
  Spectrum s = eigh(rho);
  if (s.eigenvalues(0) < -1e-12) {
    throw Error(Errc::NotPSD, "density matrix has eigenvalue " + std::to_string(s.eigenvalues(0)));
  }
  weights_ = s.eigenvalues.cwiseMax(0.0);
  vectors_ = std::move(s.eigenvectors);
}

DensityMatrix::DensityMatrix(Vector weights, Matrix vectors)
    : weights_(std::move(weights)), vectors_(std::move(vectors)) {
  if (vectors_.rows() != weights_.size() || vectors_.cols() != weights_.size()) {
    throw Error(Errc::DimMismatch, "density factorization shapes disagree");
  }
  if ((weights_.array() < 0.0).any() || std::abs(weights_.sum() - 1.0) > 1e-12) {
    throw Error(Errc::InvalidMatrix, "weights must be non-negative and sum to 1");
  }
}

SymmetricMatrix DensityMatrix::matrix() const {
  return SymmetricMatrix(vectors_ * weights_.asDiagonal() * vectors_.transpose());
}

namespace {

// Columns of V diag(sqrt(w)) whose weight is not negligible.
Matrix weighted_support(const DensityMatrix& d) {
  const Vector& w = d.weights();
  const double cut = w.maxCoeff() * 1e-36;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w(i) > cut) keep.push_back(i);
  Matrix out(d.dim(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k)
    out.col(static_cast<Eigen::Index>(k)) = d.vectors().col(keep[k]) * std::sqrt(w(keep[k]));
  return out;
}

}  // namespace

double bures_distance_sq(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw Error(Errc::DimMismatch, "fidelity operands");
  const Matrix a = weighted_support(rho);
  const Matrix b = weighted_support(sigma);
  const Matrix c = b.transpose() * a;  // |T| x |S|

  // Polar factor U = Y X^T of B^T A = Y S X^T, mapping A's columns onto B's.
  Eigen::BDCSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Matrix& y = svd.matrixU();
  const Matrix& x = svd.matrixV();
  const Matrix u = y * x.transpose();
  const double aligned = (a - b * u).squaredNorm();
  const double leftover = (b - b * (y * y.transpose())).squaredNorm();
  return std::clamp(aligned + leftover, 0.0, 2.0);
}

double root_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return std::clamp(1.0 - 0.5 * bures_distance_sq(rho, sigma), 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const double root = root_fidelity(rho, sigma);
  return root * root;
}

}  // namespace critfish
