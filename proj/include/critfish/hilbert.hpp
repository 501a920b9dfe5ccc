#pragma once

#include "critfish/linalg.hpp"

namespace critfish {

/// Truncated Fock space |0>..|n_max-1>.
///
/// `x2` is the truncation of the full operator (a + a^dag)^2 =
/// a^2 + a^dag^2 + 2 a^dag a + 1, so its diagonal is 2n+1 on every kept level,
/// including the top one. The annihilator is not symmetric and is kept as a
/// general matrix.
struct FockOps {
  int n_max;
  Matrix a;
  SymmetricMatrix num;
  SymmetricMatrix x2;
};

/// Maximal-spin (j = N/2) collective spin operators in the Dicke basis,
/// ordered m = -j, ..., +j. Spin-1/2 convention: a single spin has Sz = ±1/2.
struct DickeOps {
  int n_spins;
  SymmetricMatrix sz;
  SymmetricMatrix sx;
  SymmetricMatrix sx2;
};

/// Pauli-chain operators on 2^N states. Site 1 is the leftmost Kronecker
/// factor (most significant bit); sigma_z|0> = +|0>.
struct ChainOps {
  int n_sites;
  SymmetricMatrix sz_total;
  SymmetricMatrix sx_total;
  /// sum_n sigma_x^n sigma_x^{n+1} with site N+1 identified with site 1.
  SymmetricMatrix xx_pbc;
  /// N == 2: the ring closure duplicates the single bond.
  bool doubled_bond;
};

inline constexpr int kMaxChainSites = 14;

FockOps make_fock_ops(int n_max);
DickeOps make_dicke_ops(int n_spins);
ChainOps make_chain_ops(int n_sites);

}  // namespace critfish
