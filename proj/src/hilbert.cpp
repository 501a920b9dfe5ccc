#include "critfish/hilbert.hpp"

#include <cmath>
#include <cstdint>

#include "critfish/error.hpp"

namespace critfish {

FockOps make_fock_ops(int n_max) {
  if (n_max < 2) throw Error(Errc::InvalidDimension, "Fock truncation needs n_max >= 2");
  Matrix a = Matrix::Zero(n_max, n_max);
  Vector occupation(n_max);
  Matrix x2 = Matrix::Zero(n_max, n_max);
  for (int n = 0; n < n_max; ++n) {
    occupation(n) = n;
    x2(n, n) = 2.0 * n + 1.0;
    if (n >= 1) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    if (n >= 2) {
      // <n-2| a^2 |n> = sqrt(n (n-1))
      const double v = std::sqrt(static_cast<double>(n) * (n - 1));
      x2(n - 2, n) = v;
      x2(n, n - 2) = v;
    }
  }
  return FockOps{n_max, std::move(a), SymmetricMatrix::diagonal(occupation), SymmetricMatrix(x2)};
}

DickeOps make_dicke_ops(int n_spins) {
  if (n_spins < 1) throw Error(Errc::InvalidDimension, "Dicke basis needs N >= 1");
  const int dim = n_spins + 1;
  const double j = 0.5 * n_spins;
  Vector m(dim);
  Matrix sx = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    m(k) = -j + k;
    if (k + 1 < dim) {
      const double mk = m(k);
      const double v = 0.5 * std::sqrt(j * (j + 1.0) - mk * (mk + 1.0));
      sx(k + 1, k) = v;
      sx(k, k + 1) = v;
    }
  }
  SymmetricMatrix sx_sym(sx);
  auto sx2 = sx_sym.squared();
  return DickeOps{n_spins, SymmetricMatrix::diagonal(m), std::move(sx_sym), std::move(sx2)};
}

ChainOps make_chain_ops(int n_sites) {
  if (n_sites < 1 || n_sites > kMaxChainSites) {
    throw Error(Errc::InvalidDimension,
                "chain length must be in [1, " + std::to_string(kMaxChainSites) + "]");
  }
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  // Bit of site s (1-based) in a basis index.
  auto bit = [n_sites](int s) { return std::uint64_t{1} << (n_sites - s); };

  Vector sz(dim);
  Matrix sx = Matrix::Zero(dim, dim);
  Matrix xx = Matrix::Zero(dim, dim);
  for (Eigen::Index state = 0; state < dim; ++state) {
    const auto u = static_cast<std::uint64_t>(state);
    double z = 0.0;
    for (int s = 1; s <= n_sites; ++s) {
      z += (u & bit(s)) ? -1.0 : 1.0;
      sx(static_cast<Eigen::Index>(u ^ bit(s)), state) += 1.0;
      const int next = s % n_sites + 1;
      const std::uint64_t flip = bit(s) ^ bit(next);  // zero for N == 1: sigma_x^2 = 1
      xx(static_cast<Eigen::Index>(u ^ flip), state) += 1.0;
    }
    sz(state) = z;
  }
  return ChainOps{n_sites, SymmetricMatrix::diagonal(sz), SymmetricMatrix(sx), SymmetricMatrix(xx),
                  n_sites == 2};
}

}  // namespace critfish
