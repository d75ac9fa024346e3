#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "opfid/spectra.hpp"
#include "opfid/types.hpp"

namespace opfid::rmt {

enum class Ensemble { GOE, GUE, PoissonDiagonal };

std::string to_string(Ensemble kind);

/// A random-matrix ensemble with a deterministic seeded stream per draw.
/// Variance convention (GOE): off-diagonal variance sigma^2, diagonal 2 sigma^2.
/// GUE: E|V_nm|^2 = sigma^2 off-diagonal, diagonal real with variance sigma^2.
/// PoissonDiagonal: sorted diagonal of i.i.d. N(0, sigma^2), no repulsion.
struct EnsembleSpec {
  Ensemble kind = Ensemble::GOE;
  int dim = 2;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

void validate(const EnsembleSpec& spec);

/// Draws sample `draw_index` of the ensemble. Identical (spec, draw_index)
/// yield identical matrices across runs and thread counts.
HermitianMatrix sample_matrix(const EnsembleSpec& spec, std::uint64_t draw_index);

/// Perturbation-averaged chi1 for a GOE perturbation of strength sigma:
///   sigma^2 sum_{n != m} rho_nn delta_t(E_n - E_m).
/// Depends on the spectrum only; the off-diagonal variance convention fixes
/// the proportionality constant so Monte Carlo matches with equality.
double avg_chi1_analytic(const RealVector& energies, const spectra::StateWeights& rho,
                         double t, double sigma);
double avg_chi1_analytic(const spectra::EigenSystem& eig, const spectra::StateWeights& rho,
                         double t, double sigma);

/// Perturbation-averaged chi2: 2 sigma^2 t^2 (1 - tr rho^2). The factor 2 is
/// the GOE diagonal variance; only the state purity survives the average.
double avg_chi2_analytic(const spectra::StateWeights& rho, double t, double sigma);

struct EnsembleEstimate {
  double mean = 0.0;
  double std_error = 0.0; // sample std / sqrt(n)
  int n_samples = 0;
  double t = 0.0;
  std::vector<double> per_sample;
};

EnsembleEstimate make_estimate(const std::vector<double>& samples, double t);

/// Averages fidelity::chi1 / chi2 over `n_samples` random perturbations of H
/// drawn from v_spec. The analytic formulas above are the oracle: means must
/// bracket them within a few standard errors.
std::pair<EnsembleEstimate, EnsembleEstimate> monte_carlo_avg_chi(
    const HermitianMatrix& h, const spectra::StateWeights& rho, double t,
    const EnsembleSpec& v_spec, int n_samples);

/// For each t, the ensemble mean over sampled H of avg_chi1_analytic / t with
/// uniform rho and sigma = 1, each spectrum first rescaled to unit mean level
/// spacing (over the central 80% of levels) for fair cross-ensemble
/// comparison. Distinguishes regular (Poisson, finite limit) from chaotic
/// (GOE, suppressed) ensembles at large t.
std::vector<EnsembleEstimate> ensemble_conjecture_experiment(const EnsembleSpec& h_spec,
                                                             const std::vector<double>& times,
                                                             int n_samples);

/// Row of the estimates CSV: ensemble,dim,t,n_samples,mean,stderr,seed.
struct EstimateRecord {
  std::string ensemble;
  int dim = 0;
  double t = 0.0;
  int n_samples = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

std::string estimates_csv(const std::vector<EstimateRecord>& records);
void write_estimates_csv(const std::vector<EstimateRecord>& records,
                         const std::filesystem::path& path);

}  // namespace opfid::rmt
