#pragma once

// Dense real-symmetric linear algebra used by every model in the toolkit.
//
// All operators handled here are real symmetric: the Fock, Dicke and Pauli
// chain bases used by the models give real matrix elements for every
// Hamiltonian and observable, so no complex arithmetic is involved.

#include <Eigen/Dense>

namespace critfish {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense real symmetric matrix. Construction symmetrizes the input as
/// (M + M^T)/2, so entries(i,j) == entries(j,i) holds bit-exactly.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(const Matrix& m);

  static SymmetricMatrix identity(Eigen::Index dim);
  static SymmetricMatrix diagonal(const Vector& d);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }

  /// Largest absolute entry.
  double max_abs() const;

  SymmetricMatrix operator+(const SymmetricMatrix& o) const;
  SymmetricMatrix operator-(const SymmetricMatrix& o) const;
  SymmetricMatrix operator*(double s) const;
  /// Square of the operator (A·A), symmetric by construction.
  SymmetricMatrix squared() const;

 private:
  Matrix m_;
};

inline SymmetricMatrix operator*(double s, const SymmetricMatrix& m) { return m * s; }

/// Ascending eigenvalues with an orthonormal column eigenvector matrix.
/// Each eigenvector's largest-magnitude component is positive (first such
/// index on ties).
struct Spectrum {
  Vector eigenvalues;
  Matrix eigenvectors;

  Eigen::Index dim() const noexcept { return eigenvalues.size(); }
  /// max |E_n|, or 1 for the all-zero spectrum; the reference scale for
  /// degeneracy and gap tolerances.
  double scale() const;
};

/// Unit-trace PSD real symmetric matrix kept together with its spectral
/// factorization rho = V diag(w) V^T. Weights are exact when built from a
/// Gibbs state, which keeps fidelities accurate for nearly pure states.
class DensityMatrix {
 public:
  /// Validates trace (1e-12) and positivity (min eigenvalue >= -1e-12).
  explicit DensityMatrix(const SymmetricMatrix& rho);
  /// Builds from a factorization; weights must be >= 0 and sum to 1.
  DensityMatrix(Vector weights, Matrix vectors);

  Eigen::Index dim() const noexcept { return weights_.size(); }
  const Vector& weights() const noexcept { return weights_; }
  const Matrix& vectors() const noexcept { return vectors_; }
  SymmetricMatrix matrix() const;

 private:
  Vector weights_;
  Matrix vectors_;
};

/// Eigendecomposition of a symmetric matrix. Decouples the matrix into the
/// connected components of its sparsity graph and diagonalizes each block
/// separately; output is deterministic for identical input.
/// Throws InvalidMatrix on non-finite entries.
Spectrum eigh(const SymmetricMatrix& m);

/// Principal square root of a PSD matrix. Eigenvalues in
/// [-1e-10*||M||, 0) are clamped to zero, anything lower throws NotPSD.
SymmetricMatrix psd_sqrt(const SymmetricMatrix& m);

/// Squared Bures distance 2 (1 - tr sqrt(sqrt(rho) sigma sqrt(rho))).
///
/// With A = V diag(sqrt(p)) and B = W diag(sqrt(q)) the distance is
/// min_U ||A - B U||_F^2 over partial isometries U; the minimizer is the polar
/// factor of B^T A. Evaluating the residual norm directly keeps full relative
/// accuracy for nearby states, where 1 - fidelity is far below roundoff of
/// the fidelity itself. Weights below 1e-36 of the largest are dropped.
double bures_distance_sq(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Root fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)), clamped to [0, 1].
double root_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Uhlmann fidelity F = [tr sqrt(sqrt(rho) sigma sqrt(rho))]^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace critfish
