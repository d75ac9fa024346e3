#include "opfid/hilbert.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace opfid::hilbert {

namespace {

bool is_half_integer(double j) {
  const double twice = 2.0 * j;
  return j >= 0.0 && std::abs(twice - std::round(twice)) < 1e-9;
}

void check_dim_guard(int dim, int max_dim) {
  if (dim > max_dim) {
    throw std::invalid_argument("Hilbert space dimension " + std::to_string(dim) +
                                " exceeds the guard of " + std::to_string(max_dim) +
                                "; dense diagonalization would not be tractable");
  }
}

/// Real assembly of the interaction and diagonal pieces; the Hamiltonian is
/// real symmetric in the product basis, with lambda multiplying a fixed
/// coupling matrix whose support is disjoint from the diagonal terms.
struct DickePieces {
  RealMatrix diagonal; // omega0 (I ⊗ Jz) + omega (n ⊗ I)
  RealMatrix coupling; // (1/sqrt(2j)) * interaction, i.e. dH/dlambda
};

DickePieces assemble_pieces(const DickeParams& p) {
  const SpinOperators spin = build_spin_operators(p.j());
  const BosonOperators boson = build_boson_operators(p.boson_cutoff);
  const int sdim = p.spin_dim();
  const int bdim = p.boson_cutoff;

  const RealMatrix spin_id = RealMatrix::Identity(sdim, sdim);
  const RealMatrix boson_id = RealMatrix::Identity(bdim, bdim);

  DickePieces pieces;
  pieces.diagonal = p.omega0 * Eigen::kroneckerProduct(boson_id, spin.jz).eval() +
                    p.omega * Eigen::kroneckerProduct(boson.number, spin_id).eval();

  const double prefactor = 1.0 / std::sqrt(2.0 * p.j());
  if (p.rwa) {
    // Keep only the co-rotating terms a† J- + a J+; still parity preserving.
    pieces.coupling =
        prefactor * (Eigen::kroneckerProduct(boson.a_dagger, spin.jminus).eval() +
                     Eigen::kroneckerProduct(boson.a, spin.jplus).eval());
  } else {
    const RealMatrix x_boson = boson.a_dagger + boson.a;
    const RealMatrix x_spin = spin.jplus + spin.jminus;
    pieces.coupling = prefactor * Eigen::kroneckerProduct(x_boson, x_spin).eval();
  }
  return pieces;
}

}  // namespace

void validate(const DickeParams& p) {
  if (p.n_atoms < 1) throw std::invalid_argument("DickeParams: n_atoms must be positive");
  if (p.boson_cutoff < 2) throw std::invalid_argument("DickeParams: boson_cutoff must be >= 2");
  if (!(p.omega > 0.0)) throw std::invalid_argument("DickeParams: omega must be positive");
  if (!(p.omega0 > 0.0)) throw std::invalid_argument("DickeParams: omega0 must be positive");
  if (!std::isfinite(p.coupling)) throw std::invalid_argument("DickeParams: coupling must be finite");
}

ProductBasis make_product_basis(const DickeParams& p) {
  validate(p);
  ProductBasis basis;
  basis.boson_dim = p.boson_cutoff;
  basis.spin_dim = p.spin_dim();
  basis.labels.reserve(static_cast<std::size_t>(basis.dim()));
  for (int n = 0; n < basis.boson_dim; ++n) {
    for (int s = 0; s < basis.spin_dim; ++s) {
      basis.labels.push_back({n, s});
    }
  }
  return basis;
}

SpinOperators build_spin_operators(double j) {
  if (!is_half_integer(j)) {
    throw std::invalid_argument("build_spin_operators: j must be a non-negative half-integer");
  }
  const int dim = static_cast<int>(std::lround(2.0 * j)) + 1;
  SpinOperators ops;
  ops.jz = RealMatrix::Zero(dim, dim);
  ops.jplus = RealMatrix::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) {
    const double m = s - j;
    ops.jz(s, s) = m;
    if (s + 1 < dim) {
      // <m+1|J+|m> = sqrt(j(j+1) - m(m+1)); rows/cols indexed by m + j.
      ops.jplus(s + 1, s) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
  }
  ops.jminus = ops.jplus.transpose();
  return ops;
}

BosonOperators build_boson_operators(int m_levels) {
  if (m_levels < 2) {
    throw std::invalid_argument("build_boson_operators: need at least 2 Fock levels");
  }
  BosonOperators ops;
  ops.a = RealMatrix::Zero(m_levels, m_levels);
  ops.number = RealMatrix::Zero(m_levels, m_levels);
  for (int n = 1; n < m_levels; ++n) {
    ops.a(n - 1, n) = std::sqrt(static_cast<double>(n));
    ops.number(n, n) = n;
  }
  ops.a_dagger = ops.a.transpose();
  return ops;
}

DickeSystem build_dicke_hamiltonian(const DickeParams& p, int max_dim) {
  validate(p);
  check_dim_guard(p.dim(), max_dim);
  const DickePieces pieces = assemble_pieces(p);
  const double scale = p.coupling; // H is affine in lambda
  RealMatrix h = pieces.diagonal + scale * pieces.coupling;
  DickeSystem system;
  system.hamiltonian = h.cast<Complex>();
  system.basis = make_product_basis(p);
  return system;
}

HermitianMatrix build_dicke_derivative(const DickeParams& p, int max_dim) {
  validate(p);
  check_dim_guard(p.dim(), max_dim);
  return assemble_pieces(p).coupling.cast<Complex>();
}

ParityBlocks parity_split(const HermitianMatrix& h, const ProductBasis& basis) {
  const int d = basis.dim();
  if (h.rows() != d || h.cols() != d) {
    throw std::invalid_argument("parity_split: matrix does not match the basis dimension");
  }

  ParityBlocks blocks;
  for (int idx = 0; idx < d; ++idx) {
    (basis.quanta(idx) % 2 == 0 ? blocks.even_indices : blocks.odd_indices).push_back(idx);
  }

  // H must commute with the parity operator: cross-sector entries are zero.
  const double tol = 1e-10 * max_abs(h);
  double worst = 0.0;
  for (int i : blocks.even_indices) {
    for (int k : blocks.odd_indices) {
      worst = std::max(worst, std::max(std::abs(h(i, k)), std::abs(h(k, i))));
    }
  }
  if (worst > tol) {
    throw std::runtime_error("parity_split: matrix does not commute with parity; largest "
                             "cross-sector entry " +
                             std::to_string(worst));
  }

  auto extract = [&h](const std::vector<int>& idx) {
    const int n = static_cast<int>(idx.size());
    HermitianMatrix block(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) block(r, c) = h(idx[r], idx[c]);
    }
    return block;
  };
  blocks.even = extract(blocks.even_indices);
  blocks.odd = extract(blocks.odd_indices);
  return blocks;
}

}  // namespace opfid::hilbert
