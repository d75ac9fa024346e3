#include "opfid/fidelity.hpp"

#include <cmath>
#include <stdexcept>

namespace opfid::fidelity {

namespace {

void check_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

/// rho_n-weighted phase sum |sum_{n,m} rho_n |O_nm|^2 e^{it(Ea_n - Eb_m)}|
/// shared by the exact fidelity and the work-distribution identity.
double weighted_phase_modulus(const RealMatrix& overlap_sq, const RealVector& e_a,
                              const RealVector& e_b, const RealVector& rho, double t) {
  const int d = static_cast<int>(e_a.size());
  ComplexVector phases_b(d);
  for (int m = 0; m < d; ++m) phases_b(m) = std::polar(1.0, -t * e_b(m));
  const RealVector re = overlap_sq * phases_b.real();
  const RealVector im = overlap_sq * phases_b.imag();
  Complex acc(0.0, 0.0);
  for (int n = 0; n < d; ++n) {
    acc += rho(n) * std::polar(1.0, t * e_a(n)) * Complex(re(n), im(n));
  }
  return std::abs(acc);
}

}  // namespace

PerturbationInEigenbasis perturbation_in_eigenbasis(const spectra::EigenSystem& eig,
                                                    const HermitianMatrix& hprime) {
  check_same_dim(eig.dim(), static_cast<int>(hprime.rows()), "perturbation_in_eigenbasis");
  check_same_dim(static_cast<int>(hprime.rows()), static_cast<int>(hprime.cols()),
                 "perturbation_in_eigenbasis");
  return eig.vectors.adjoint() * hprime * eig.vectors;
}

double chi1(const spectra::EigenSystem& eig, const PerturbationInEigenbasis& w,
            const spectra::StateWeights& rho, double t) {
  const int d = eig.dim();
  check_same_dim(d, static_cast<int>(w.rows()), "chi1");
  check_same_dim(d, rho.dim(), "chi1");
  if (t < 0.0) throw std::invalid_argument("chi1: t must be >= 0");

  double acc = 0.0;
  for (int n = 0; n < d; ++n) {
    const double weight = rho.probs(n);
    for (int m = 0; m < d; ++m) {
      if (m == n) continue;
      acc += weight * std::norm(w(n, m)) * spectra::delta_t(eig.energies(n) - eig.energies(m), t);
    }
  }
  return acc;
}

double chi2(const PerturbationInEigenbasis& w, const spectra::StateWeights& rho, double t) {
  const int d = rho.dim();
  check_same_dim(d, static_cast<int>(w.rows()), "chi2");

  Complex mean(0.0, 0.0);
  for (int n = 0; n < d; ++n) mean += rho.probs(n) * w(n, n);
  double variance = 0.0;
  for (int n = 0; n < d; ++n) variance += rho.probs(n) * std::norm(w(n, n) - mean);
  return t * t * variance;
}

double operator_fidelity_exact(const spectra::EigenSystem& eig_a,
                               const spectra::EigenSystem& eig_b,
                               const spectra::StateWeights& rho_a, double t) {
  const int d = eig_a.dim();
  check_same_dim(d, eig_b.dim(), "operator_fidelity_exact");
  check_same_dim(d, rho_a.dim(), "operator_fidelity_exact");

  const RealMatrix overlap_sq = (eig_a.vectors.adjoint() * eig_b.vectors).cwiseAbs2();
  return weighted_phase_modulus(overlap_sq, eig_a.energies, eig_b.energies, rho_a.probs, t);
}

double taylor_residual(const spectra::EigenSystem& eig, const HermitianMatrix& hprime,
                       const spectra::StateWeights& rho, double t, double dlambda) {
  if (dlambda < 0.0) throw std::invalid_argument("taylor_residual: dlambda must be >= 0");

  const HermitianMatrix h_a =
      eig.vectors * eig.energies.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  HermitianMatrix h_b = h_a + dlambda * hprime;
  h_b = 0.5 * (h_b + h_b.adjoint()).eval(); // scrub rounding asymmetry

  const spectra::EigenSystem eig_b = spectra::eigendecompose(h_b);
  const double f_exact = operator_fidelity_exact(eig, eig_b, rho, t);

  const PerturbationInEigenbasis w = perturbation_in_eigenbasis(eig, hprime);
  const double chi = chi1(eig, w, rho, t) + chi2(w, rho, t);
  return std::abs(f_exact - (1.0 - 0.5 * dlambda * dlambda * chi));
}

double WorkDistribution::characteristic_modulus(double t) const {
  Complex acc(0.0, 0.0);
  for (const Atom& atom : atoms) acc += atom.weight * std::polar(1.0, atom.frequency * t);
  return std::abs(acc);
}

double WorkDistribution::total_weight() const {
  double sum = 0.0;
  for (const Atom& atom : atoms) sum += atom.weight;
  return sum;
}

WorkDistribution work_distribution(const spectra::EigenSystem& eig_a,
                                   const spectra::EigenSystem& eig_b,
                                   const spectra::StateWeights& rho_a) {
  const int d = eig_a.dim();
  check_same_dim(d, eig_b.dim(), "work_distribution");
  check_same_dim(d, rho_a.dim(), "work_distribution");

  const RealMatrix overlap_sq = (eig_a.vectors.adjoint() * eig_b.vectors).cwiseAbs2();
  WorkDistribution dist;
  dist.atoms.reserve(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      const double weight = rho_a.probs(n) * overlap_sq(n, m);
      if (weight < 1e-16) continue;
      dist.atoms.push_back({eig_a.energies(n) - eig_b.energies(m), weight});
    }
  }
  return dist;
}

double loschmidt_echo(const spectra::EigenSystem& eig_b, const ComplexVector& psi0, double t) {
  check_same_dim(eig_b.dim(), static_cast<int>(psi0.size()), "loschmidt_echo");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("loschmidt_echo: state is not normalized");
  }
  const ComplexVector coeffs = eig_b.vectors.adjoint() * psi0;
  Complex acc(0.0, 0.0);
  for (int m = 0; m < eig_b.dim(); ++m) {
    acc += std::norm(coeffs(m)) * std::polar(1.0, -t * eig_b.energies(m));
  }
  return std::abs(acc);
}

}  // namespace opfid::fidelity
