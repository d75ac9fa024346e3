#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "opfid/types.hpp"

namespace opfid::spectra {

/// Ascending eigenvalues and orthonormal eigenvectors (columns).
struct EigenSystem {
  RealVector energies;
  Eigen::MatrixXcd vectors;

  int dim() const { return static_cast<int>(energies.size()); }
};

/// Dense Hermitian eigendecomposition. Real-symmetric inputs (zero imaginary
/// part) take a real solver path and come back with exactly real vectors.
/// Throws on non-Hermitian input or solver non-convergence.
EigenSystem eigendecompose(const HermitianMatrix& h);

struct EigenValidation {
  double orthonormality_error; // max |V†V - I|
  double residual_error;       // max |H V - V diag(E)| / max|H|
};

/// Residual checks of an EigenSystem against its source matrix.
EigenValidation validate_eigensystem(const EigenSystem& eig, const HermitianMatrix& h);

/// Probability weights rho_nn over an eigenbasis, diagonal ansatz [rho, H] = 0.
struct StateWeights {
  RealVector probs;
  double beta = 0.0; // 0 = uniform, +inf = ground state

  int dim() const { return static_cast<int>(probs.size()); }
};

StateWeights uniform_weights(int dim);

/// Gibbs weights e^{-beta (E_n - E_0)} / Z (shifted by E_0 for overflow
/// safety). beta = 0 gives 1/d; beta = +inf selects the ground level,
/// uniform over degeneracies within 1e-10 of E_0. Rejects beta < 0.
StateWeights thermal_weights(const EigenSystem& eig, double beta);

/// Inverse temperature fixing the top-to-bottom weight ratio:
/// exp[-beta (e_max - e_min)] = ratio.
double beta_for_weight_ratio(double e_min, double e_max, double ratio = 0.05);

/// The filter kernel [sin(x t/2) / (x/2)]^2 = t^2 sinc^2(x t / 2).
/// For |x t| < 1e-4 the series t^2 (1 - (xt)^2/12 + (xt)^4/360) avoids
/// cancellation; t^{-1} delta_t -> 2 pi delta(x) as t -> inf.
double delta_t(double x, double t);

/// Trapezoid quadrature of t^{-1} delta_t over [-x_max, x_max]; a test oracle
/// for the 2-pi normalization of the kernel.
double delta_t_integral_check(double t, double x_max, std::size_t n_points);

struct Histogram {
  std::vector<double> edges;     // n_bins + 1 ascending
  std::vector<double> densities; // probability density per bin, integrates to 1
  double overflow_mass = 0.0;    // fraction of samples beyond the last edge
};

/// Unfolded spectrum with unit mean spacing.
struct SpacingSample {
  std::vector<double> raw_levels;      // retained (edge-trimmed) input levels
  std::vector<double> unfolded_levels; // smoothed staircase values, rescaled
  std::vector<double> spacings;        // consecutive differences
  Histogram histogram;                 // empty until filled by the caller
};

/// Unfolds a sorted spectrum by least-squares fitting a polynomial of the
/// given degree to the cumulative staircase N(E), then rescaling to unit mean
/// spacing. The lowest and highest 2% of levels are discarded before fitting
/// (edge effects). Throws when fewer than degree+10 levels remain or the fit
/// is ill-conditioned.
SpacingSample unfold(const std::vector<double>& levels, int degree = 10);

/// Normalized Wigner surmise P_W(S) = (pi/2) S exp(-pi S^2 / 4): unit mass
/// and unit mean, the GOE (nu = 1) nearest-neighbor reference.
double wigner_pdf(double s);

/// Poisson spacing density exp(-S) of uncorrelated (regular) spectra.
double poisson_pdf(double s);

/// Density-normalized histogram of spacings over [0, s_max]; mass beyond
/// s_max is reported separately, in-range densities integrate to 1.
Histogram spacing_histogram(const std::vector<double>& spacings, int n_bins = 50,
                            double s_max = 4.0);

/// Discrete relative entropy sum_i p_i ln(p_i / q_i) with p from the
/// histogram and q from a midpoint-rule integral of the reference density
/// over each bin (clamped below at 1e-12). Empty bins contribute zero.
double relative_entropy(const Histogram& hist, const std::function<double(double)>& reference);

}  // namespace opfid::spectra
