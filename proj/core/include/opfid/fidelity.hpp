#pragma once

#include <vector>

#include "opfid/spectra.hpp"
#include "opfid/types.hpp"

namespace opfid::fidelity {

/// W_{nm} = <n|H'|m> in the eigenbasis of H; Hermitian when H' is.
using PerturbationInEigenbasis = Eigen::MatrixXcd;

/// Basis rotation W = V† H' V. Preserves the Frobenius norm.
PerturbationInEigenbasis perturbation_in_eigenbasis(const spectra::EigenSystem& eig,
                                                    const HermitianMatrix& hprime);

/// Off-diagonal metric term
///   chi1 = sum_{n != m} rho_nn |W_nm|^2 delta_t(E_n - E_m).
/// Non-negative; vanishes at t = 0 and for diagonal W.
double chi1(const spectra::EigenSystem& eig, const PerturbationInEigenbasis& w,
            const spectra::StateWeights& rho, double t);

/// Diagonal (variance) metric term
///   chi2 = t^2 [ sum_n rho_nn |W_nn|^2 - |sum_n rho_nn W_nn|^2 ],
/// computed in variance form so it is non-negative by construction.
double chi2(const PerturbationInEigenbasis& w, const spectra::StateWeights& rho, double t);

/// Exact operator fidelity |sum_n rho_nn <n| e^{+itH_A} e^{-itH_B} |n>|
/// between the two finite-time evolutions, with rho diagonal in the A basis.
/// Phases are applied spectrally; no dense matrix exponentials.
double operator_fidelity_exact(const spectra::EigenSystem& eig_a,
                               const spectra::EigenSystem& eig_b,
                               const spectra::StateWeights& rho_a, double t);

/// |F_exact(lambda, lambda + dlambda) - (1 - dlambda^2/2 (chi1 + chi2))| for
/// the pair H, H + dlambda H' (H reconstructed from eig). Scales as
/// O(dlambda^3), which is the independent check that the chi sums implement
/// the second-order expansion of the exact fidelity.
double taylor_residual(const spectra::EigenSystem& eig, const HermitianMatrix& hprime,
                       const spectra::StateWeights& rho, double t, double dlambda);

/// Spectral atoms of the sudden-quench work distribution
///   P(w) = sum_{n,m} rho_nn |<n|m'>|^2 delta(w - E_n + E'_m).
struct WorkDistribution {
  struct Atom {
    double frequency; // E_n - E'_m
    double weight;    // rho_nn |<n|m'>|^2
  };
  std::vector<Atom> atoms;

  /// |sum_k w_k e^{i w_k t}|; equals operator_fidelity_exact by construction.
  double characteristic_modulus(double t) const;

  double total_weight() const;
};

/// All d^2 atoms, pruning weights below 1e-16.
WorkDistribution work_distribution(const spectra::EigenSystem& eig_a,
                                   const spectra::EigenSystem& eig_b,
                                   const spectra::StateWeights& rho_a);

/// Survival amplitude |<psi0| e^{-itH_B} |psi0>| via spectral phases.
/// Requires a normalized state.
double loschmidt_echo(const spectra::EigenSystem& eig_b, const ComplexVector& psi0, double t);

}  // namespace opfid::fidelity
