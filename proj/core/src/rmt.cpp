#include "opfid/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "opfid/csv.hpp"
#include "opfid/fidelity.hpp"
#include "opfid/rng.hpp"

namespace opfid::rmt {

std::string to_string(Ensemble kind) {
  switch (kind) {
    case Ensemble::GOE: return "goe";
    case Ensemble::GUE: return "gue";
    case Ensemble::PoissonDiagonal: return "poisson";
  }
  return "unknown";
}

void validate(const EnsembleSpec& spec) {
  if (spec.dim < 2) throw std::invalid_argument("EnsembleSpec: dim must be >= 2");
  if (!(spec.sigma > 0.0)) throw std::invalid_argument("EnsembleSpec: sigma must be positive");
}

HermitianMatrix sample_matrix(const EnsembleSpec& spec, std::uint64_t draw_index) {
  validate(spec);
  Rng rng = Rng::for_draw(spec.seed, draw_index);
  const int d = spec.dim;
  HermitianMatrix m = HermitianMatrix::Zero(d, d);

  switch (spec.kind) {
    case Ensemble::GOE: {
      // Entries drawn row by row over the upper triangle: fixed order keeps
      // the draw reproducible.
      const double diag_sd = spec.sigma * std::sqrt(2.0);
      for (int i = 0; i < d; ++i) {
        m(i, i) = diag_sd * rng.normal();
        for (int j = i + 1; j < d; ++j) {
          const double v = spec.sigma * rng.normal();
          m(i, j) = v;
          m(j, i) = v;
        }
      }
      break;
    }
    case Ensemble::GUE: {
      const double off_sd = spec.sigma / std::sqrt(2.0);
      for (int i = 0; i < d; ++i) {
        m(i, i) = spec.sigma * rng.normal();
        for (int j = i + 1; j < d; ++j) {
          const Complex v(off_sd * rng.normal(), off_sd * rng.normal());
          m(i, j) = v;
          m(j, i) = std::conj(v);
        }
      }
      break;
    }
    case Ensemble::PoissonDiagonal: {
      std::vector<double> diag(static_cast<std::size_t>(d));
      for (double& x : diag) x = spec.sigma * rng.normal();
      std::sort(diag.begin(), diag.end());
      for (int i = 0; i < d; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
      break;
    }
  }
  return m;
}

double avg_chi1_analytic(const RealVector& energies, const spectra::StateWeights& rho, double t,
                         double sigma) {
  const int d = static_cast<int>(energies.size());
  if (rho.dim() != d) throw std::invalid_argument("avg_chi1_analytic: dimension mismatch");

  double acc = 0.0;
  for (int n = 0; n < d; ++n) {
    const double weight = rho.probs(n);
    for (int m = 0; m < d; ++m) {
      if (m == n) continue;
      acc += weight * spectra::delta_t(energies(n) - energies(m), t);
    }
  }
  return sigma * sigma * acc;
}

double avg_chi1_analytic(const spectra::EigenSystem& eig, const spectra::StateWeights& rho,
                         double t, double sigma) {
  return avg_chi1_analytic(eig.energies, rho, t, sigma);
}

double avg_chi2_analytic(const spectra::StateWeights& rho, double t, double sigma) {
  const double purity = rho.probs.squaredNorm();
  return 2.0 * sigma * sigma * t * t * (1.0 - purity);
}

EnsembleEstimate make_estimate(const std::vector<double>& samples, double t) {
  const int n = static_cast<int>(samples.size());
  if (n < 2) throw std::invalid_argument("make_estimate: need at least 2 samples");

  EnsembleEstimate est;
  est.n_samples = n;
  est.t = t;
  est.per_sample = samples;
  double sum = 0.0;
  for (double x : samples) sum += x;
  est.mean = sum / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - est.mean) * (x - est.mean);
  est.std_error = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
  return est;
}

std::pair<EnsembleEstimate, EnsembleEstimate> monte_carlo_avg_chi(
    const HermitianMatrix& h, const spectra::StateWeights& rho, double t,
    const EnsembleSpec& v_spec, int n_samples) {
  validate(v_spec);
  if (v_spec.dim != h.rows()) {
    throw std::invalid_argument("monte_carlo_avg_chi: ensemble dim does not match H");
  }
  if (n_samples < 2) throw std::invalid_argument("monte_carlo_avg_chi: need at least 2 samples");

  const spectra::EigenSystem eig = spectra::eigendecompose(h);
  std::vector<double> chi1_samples(static_cast<std::size_t>(n_samples));
  std::vector<double> chi2_samples(static_cast<std::size_t>(n_samples));

#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < n_samples; ++k) {
    const HermitianMatrix v = sample_matrix(v_spec, static_cast<std::uint64_t>(k));
    const fidelity::PerturbationInEigenbasis w = fidelity::perturbation_in_eigenbasis(eig, v);
    chi1_samples[static_cast<std::size_t>(k)] = fidelity::chi1(eig, w, rho, t);
    chi2_samples[static_cast<std::size_t>(k)] = fidelity::chi2(w, rho, t);
  }

  return {make_estimate(chi1_samples, t), make_estimate(chi2_samples, t)};
}

namespace {

/// Mean level spacing over the central 80% of a sorted spectrum.
double central_mean_spacing(const RealVector& energies) {
  const int d = static_cast<int>(energies.size());
  const int skip = d / 10;
  const int lo = skip;
  const int hi = d - 1 - skip;
  if (hi <= lo) throw std::invalid_argument("central_mean_spacing: spectrum too small");
  return (energies(hi) - energies(lo)) / static_cast<double>(hi - lo);
}

}  // namespace

std::vector<EnsembleEstimate> ensemble_conjecture_experiment(const EnsembleSpec& h_spec,
                                                             const std::vector<double>& times,
                                                             int n_samples) {
  validate(h_spec);
  if (times.empty()) throw std::invalid_argument("ensemble_conjecture_experiment: no times");
  if (n_samples < 2) {
    throw std::invalid_argument("ensemble_conjecture_experiment: need at least 2 samples");
  }

  const spectra::StateWeights rho = spectra::uniform_weights(h_spec.dim);
  const std::size_t n_times = times.size();
  std::vector<std::vector<double>> per_time(n_times,
                                            std::vector<double>(static_cast<std::size_t>(n_samples)));

#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < n_samples; ++k) {
    const HermitianMatrix h = sample_matrix(h_spec, static_cast<std::uint64_t>(k));
    Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("ensemble_conjecture_experiment: eigenvalue solve failed");
    }
    RealVector energies = solver.eigenvalues();
    energies /= central_mean_spacing(energies);
    for (std::size_t i = 0; i < n_times; ++i) {
      const double t = times[i];
      per_time[i][static_cast<std::size_t>(k)] =
          t > 0.0 ? avg_chi1_analytic(energies, rho, t, 1.0) / t : 0.0;
    }
  }

  std::vector<EnsembleEstimate> estimates;
  estimates.reserve(n_times);
  for (std::size_t i = 0; i < n_times; ++i) {
    estimates.push_back(make_estimate(per_time[i], times[i]));
  }
  return estimates;
}

std::string estimates_csv(const std::vector<EstimateRecord>& records) {
  std::string out = "ensemble,dim,t,n_samples,mean,stderr,seed\n";
  for (const EstimateRecord& r : records) {
    out += r.ensemble;
    out += ',';
    out += std::to_string(r.dim);
    out += ',';
    out += csv::format_double(r.t);
    out += ',';
    out += std::to_string(r.n_samples);
    out += ',';
    out += csv::format_double(r.mean);
    out += ',';
    out += csv::format_double(r.std_error);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

void write_estimates_csv(const std::vector<EstimateRecord>& records,
                         const std::filesystem::path& path) {
  csv::write_text(path, estimates_csv(records));
}

}  // namespace opfid::rmt
