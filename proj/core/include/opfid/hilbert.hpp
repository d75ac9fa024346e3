#pragma once

#include <vector>

#include "opfid/types.hpp"

namespace opfid::hilbert {

/// Parameters of the single-mode Dicke model: N identical two-level atoms
/// (collective pseudo-spin j = N/2) coupled to one boson mode truncated at
/// `boson_cutoff` Fock levels (occupations 0 .. boson_cutoff-1).
struct DickeParams {
  int n_atoms = 2;
  double omega = 1.0;    // boson frequency
  double omega0 = 1.0;   // atomic splitting
  double coupling = 0.0; // dimensionless lambda
  int boson_cutoff = 2;  // M retained Fock levels
  bool rwa = false;      // drop the counter-rotating terms

  double j() const { return 0.5 * n_atoms; }
  int spin_dim() const { return n_atoms + 1; }
  int dim() const { return boson_cutoff * spin_dim(); }
};

/// Throws std::invalid_argument for out-of-range parameters.
void validate(const DickeParams& p);

/// Boson-major product basis: idx = n_boson * (2j+1) + spin_index, where
/// spin_index = m + j runs 0 .. 2j (m ascending from -j to +j). The ordering
/// is arbitrary but fixed so cached eigendecompositions stay reusable.
struct ProductBasis {
  struct Label {
    int n_boson;
    int spin_index; // m + j
  };

  int boson_dim = 0;
  int spin_dim = 0;
  std::vector<Label> labels;

  int dim() const { return boson_dim * spin_dim; }
  int index_of(int n_boson, int spin_index) const { return n_boson * spin_dim + spin_index; }
  double m_of(int spin_index) const { return spin_index - 0.5 * (spin_dim - 1); }
  /// Total quanta n_boson + (m + j); its parity labels the conserved sector.
  int quanta(int idx) const { return labels[idx].n_boson + labels[idx].spin_index; }
};

ProductBasis make_product_basis(const DickeParams& p);

struct SpinOperators {
  RealMatrix jz;
  RealMatrix jplus;
  RealMatrix jminus;
};

/// Collective spin-j operators in the m-ascending basis:
/// Jz = diag(-j..j), <m+1|J+|m> = sqrt(j(j+1) - m(m+1)), J- = J+^T.
/// Rejects j unless 2j is a non-negative integer.
SpinOperators build_spin_operators(double j);

struct BosonOperators {
  RealMatrix a;
  RealMatrix a_dagger;
  RealMatrix number;
};

/// Truncated ladder operators on M Fock levels: <n-1|a|n> = sqrt(n).
/// The truncation leaves [a, a†] = I except for a -(M-1) bottom-right entry.
BosonOperators build_boson_operators(int m_levels);

struct DickeSystem {
  HermitianMatrix hamiltonian;
  ProductBasis basis;
};

/// H = omega0 (I ⊗ Jz) + omega (a†a ⊗ I) + (lambda/sqrt(2j)) (a†+a) ⊗ (J+ + J-),
/// real symmetric in the product basis. With rwa the interaction becomes
/// (lambda/sqrt(2j)) (a† ⊗ J- + a ⊗ J+). Throws when dim() > max_dim.
DickeSystem build_dicke_hamiltonian(const DickeParams& p, int max_dim = kDefaultDimGuard);

/// Exact dH/dlambda, independent of lambda: (1/sqrt(2j)) (a†+a) ⊗ (J+ + J-)
/// (rwa variant differentiates the rwa interaction).
HermitianMatrix build_dicke_derivative(const DickeParams& p, int max_dim = kDefaultDimGuard);

struct ParityBlocks {
  HermitianMatrix even;
  HermitianMatrix odd;
  std::vector<int> even_indices;
  std::vector<int> odd_indices;
};

/// Splits H into the two sectors of the parity operator exp[i pi N_total],
/// N_total = a†a + Jz + j: basis state (n_b, m) is even iff n_b + m + j is
/// even. Throws if any cross-sector entry exceeds 1e-10 * max|H|.
ParityBlocks parity_split(const HermitianMatrix& h, const ProductBasis& basis);

}  // namespace opfid::hilbert
