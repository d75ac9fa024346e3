#include "opfid/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace opfid::spectra {

namespace {

constexpr double kTrimFraction = 0.02;    // levels discarded per spectrum edge
constexpr double kConditionLimit = 1e10;  // staircase-fit conditioning guard

}  // namespace

EigenSystem eigendecompose(const HermitianMatrix& h) {
  require_hermitian(h, 1e-12, "eigendecompose");

  EigenSystem eig;
  // Real-symmetric inputs get the real solver: ~4x faster and the vectors
  // come back with exactly zero imaginary part, which the binary cache needs.
  if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h.real());
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("eigendecompose: real solver failed to converge (" +
                               matrix_fingerprint(h) + ")");
    }
    eig.energies = solver.eigenvalues();
    eig.vectors = solver.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("eigendecompose: complex solver failed to converge (" +
                               matrix_fingerprint(h) + ")");
    }
    eig.energies = solver.eigenvalues();
    eig.vectors = solver.eigenvectors();
  }
  return eig;
}

EigenValidation validate_eigensystem(const EigenSystem& eig, const HermitianMatrix& h) {
  const int d = eig.dim();
  EigenValidation v;
  v.orthonormality_error =
      (eig.vectors.adjoint() * eig.vectors - HermitianMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  const HermitianMatrix residual =
      h * eig.vectors - eig.vectors * eig.energies.asDiagonal().toDenseMatrix().cast<Complex>();
  v.residual_error = residual.cwiseAbs().maxCoeff() / std::max(max_abs(h), 1e-300);
  return v;
}

StateWeights uniform_weights(int dim) {
  if (dim < 1) throw std::invalid_argument("uniform_weights: dimension must be positive");
  StateWeights w;
  w.beta = 0.0;
  w.probs = RealVector::Constant(dim, 1.0 / dim);
  return w;
}

StateWeights thermal_weights(const EigenSystem& eig, double beta) {
  if (std::isnan(beta) || beta < 0.0) {
    throw std::invalid_argument("thermal_weights: beta must be >= 0");
  }
  const int d = eig.dim();
  if (d < 1) throw std::invalid_argument("thermal_weights: empty spectrum");

  StateWeights w;
  w.beta = beta;
  if (beta == 0.0) {
    w.probs = RealVector::Constant(d, 1.0 / d);
    return w;
  }

  const double e0 = eig.energies(0);
  if (std::isinf(beta)) {
    // Ground-state sentinel: uniform over exact degeneracies of E_0.
    w.probs = RealVector::Zero(d);
    int count = 0;
    for (int n = 0; n < d; ++n) {
      if (eig.energies(n) - e0 <= 1e-10) ++count;
    }
    for (int n = 0; n < count; ++n) w.probs(n) = 1.0 / count;
    return w;
  }

  // Shift by E_0 so the largest Boltzmann factor is exactly 1.
  w.probs = (-beta * (eig.energies.array() - e0)).exp();
  w.probs /= w.probs.sum();
  return w;
}

double beta_for_weight_ratio(double e_min, double e_max, double ratio) {
  if (!(e_max > e_min)) throw std::invalid_argument("beta_for_weight_ratio: need e_max > e_min");
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw std::invalid_argument("beta_for_weight_ratio: ratio must lie in (0, 1)");
  }
  return -std::log(ratio) / (e_max - e_min);
}

double delta_t(double x, double t) {
  const double xt = x * t;
  if (std::abs(xt) < 1e-4) {
    // sinc^2 series in (xt); no x division, stable at x -> 0.
    const double q = xt * xt;
    return t * t * (1.0 - q / 12.0 + q * q / 360.0);
  }
  const double half_x = 0.5 * x;
  const double ratio = std::sin(half_x * t) / half_x;
  return ratio * ratio;
}

double delta_t_integral_check(double t, double x_max, std::size_t n_points) {
  if (n_points < 2 || !(x_max > 0.0) || !(t > 0.0)) {
    throw std::invalid_argument("delta_t_integral_check: bad grid");
  }
  const double h = 2.0 * x_max / static_cast<double>(n_points - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < n_points; ++i) {
    const double x = -x_max + h * static_cast<double>(i);
    const double f = delta_t(x, t) / t;
    sum += (i == 0 || i + 1 == n_points) ? 0.5 * f : f;
  }
  return sum * h;
}

SpacingSample unfold(const std::vector<double>& levels, int degree) {
  if (degree < 1) throw std::invalid_argument("unfold: degree must be >= 1");
  if (!std::is_sorted(levels.begin(), levels.end())) {
    throw std::invalid_argument("unfold: levels must be sorted ascending");
  }

  const std::size_t n_total = levels.size();
  const std::size_t trim = static_cast<std::size_t>(kTrimFraction * static_cast<double>(n_total));
  if (n_total < 2 * trim + static_cast<std::size_t>(degree) + 10) {
    throw std::invalid_argument("unfold: need at least degree+10 levels after trimming, got " +
                                std::to_string(n_total));
  }

  SpacingSample sample;
  sample.raw_levels.assign(levels.begin() + trim, levels.end() - trim);
  const std::size_t n = sample.raw_levels.size();

  // Fit the cumulative staircase N(E_i) = i + 1 in a variable scaled to
  // [-1, 1]; the scaling keeps the Vandermonde system well conditioned and
  // makes the fit equivariant under affine maps of the spectrum.
  const double lo = sample.raw_levels.front();
  const double hi = sample.raw_levels.back();
  const double span = hi > lo ? hi - lo : 1.0;
  auto scaled = [lo, span](double e) { return 2.0 * (e - lo) / span - 1.0; };

  Eigen::MatrixXd vandermonde(n, degree + 1);
  Eigen::VectorXd counts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = scaled(sample.raw_levels[i]);
    double p = 1.0;
    for (int k = 0; k <= degree; ++k) {
      vandermonde(i, k) = p;
      p *= x;
    }
    counts(i) = static_cast<double>(i) + 1.0;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(vandermonde, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double cond =
      svd.singularValues()(0) / std::max(svd.singularValues()(svd.singularValues().size() - 1),
                                         std::numeric_limits<double>::min());
  if (cond > kConditionLimit) {
    throw std::invalid_argument("unfold: staircase fit is ill-conditioned (condition estimate " +
                                std::to_string(cond) + "); try a lower degree");
  }
  const Eigen::VectorXd coeffs = svd.solve(counts);

  sample.unfolded_levels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = scaled(sample.raw_levels[i]);
    double acc = 0.0;
    for (int k = degree; k >= 0; --k) acc = acc * x + coeffs(k);
    sample.unfolded_levels[i] = acc;
  }

  // Rescale to exactly unit mean spacing.
  const double spread = sample.unfolded_levels.back() - sample.unfolded_levels.front();
  if (!(spread > 0.0)) {
    throw std::invalid_argument("unfold: degenerate unfolded spectrum (fit collapsed)");
  }
  const double scale = static_cast<double>(n - 1) / spread;
  for (double& e : sample.unfolded_levels) e *= scale;

  sample.spacings.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    sample.spacings[i] = sample.unfolded_levels[i + 1] - sample.unfolded_levels[i];
  }
  return sample;
}

double wigner_pdf(double s) {
  if (s < 0.0) return 0.0;
  constexpr double half_pi = 1.5707963267948966;
  return half_pi * s * std::exp(-0.25 * M_PI * s * s);
}

double poisson_pdf(double s) { return s < 0.0 ? 0.0 : std::exp(-s); }

Histogram spacing_histogram(const std::vector<double>& spacings, int n_bins, double s_max) {
  if (spacings.empty()) throw std::invalid_argument("spacing_histogram: no spacings");
  if (n_bins < 5) throw std::invalid_argument("spacing_histogram: need at least 5 bins");
  if (!(s_max > 0.0)) throw std::invalid_argument("spacing_histogram: s_max must be positive");

  Histogram hist;
  hist.edges.resize(n_bins + 1);
  const double width = s_max / n_bins;
  for (int i = 0; i <= n_bins; ++i) hist.edges[i] = width * i;

  std::vector<std::size_t> counts(n_bins, 0);
  std::size_t overflow = 0;
  for (double s : spacings) {
    if (s >= s_max) {
      ++overflow;
      continue;
    }
    int bin = static_cast<int>(s / width);
    bin = std::clamp(bin, 0, n_bins - 1); // negative spacings land in the first bin
    ++counts[static_cast<std::size_t>(bin)];
  }

  const std::size_t in_range = spacings.size() - overflow;
  hist.overflow_mass = static_cast<double>(overflow) / static_cast<double>(spacings.size());
  hist.densities.resize(n_bins, 0.0);
  if (in_range > 0) {
    for (int i = 0; i < n_bins; ++i) {
      hist.densities[static_cast<std::size_t>(i)] =
          static_cast<double>(counts[static_cast<std::size_t>(i)]) /
          (static_cast<double>(in_range) * width);
    }
  }
  return hist;
}

double relative_entropy(const Histogram& hist, const std::function<double(double)>& reference) {
  const std::size_t n = hist.densities.size();
  if (n == 0 || hist.edges.size() != n + 1) {
    throw std::invalid_argument("relative_entropy: malformed histogram");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double width = hist.edges[i + 1] - hist.edges[i];
    const double p = hist.densities[i] * width;
    if (p <= 0.0) continue;
    const double mid = 0.5 * (hist.edges[i] + hist.edges[i + 1]);
    const double q = std::max(reference(mid) * width, 1e-12);
    sum += p * std::log(p / q);
  }
  return sum;
}

}  // namespace opfid::spectra
