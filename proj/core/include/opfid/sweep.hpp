#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "opfid/fidelity.hpp"
#include "opfid/hilbert.hpp"
#include "opfid/spectra.hpp"
#include "opfid/types.hpp"

namespace opfid::sweep {

enum class Sector { Full, Even, Odd };

std::string to_string(Sector s);

struct LambdaGrid {
  double min = 0.0;
  double max = 1.0;
  int steps = 2;

  std::vector<double> values() const;
};

struct SweepConfig {
  hilbert::DickeParams dicke;       // coupling field is overridden per grid point
  LambdaGrid lambda_grid;
  std::vector<double> times;
  std::vector<double> betas;        // 0 = uniform, +inf = ground state
  Sector sector = Sector::Full;
  bool normalize = true;            // chi1 divided by its max over lambda per (t, beta)
  std::filesystem::path cache_dir;  // empty: no caching
  std::uint64_t seed = 0;           // unused by the sweep; recorded for provenance
  int max_dim = kDefaultDimGuard;
  int unfold_degree = 10;
};

struct SweepRow {
  double lambda = 0.0;
  double t = 0.0;
  double beta = 0.0;
  double chi1 = 0.0;
  double chi1_normalized = 0.0;
  double chi2 = 0.0;
  int dim = 0;
  Sector sector = Sector::Full;
  std::string status; // "ok" or "failed"
};

struct SpectralSummary {
  double lambda = 0.0;
  std::string sector;
  double relative_entropy_wigner = 0.0;
  double ground_energy = 0.0;
  int n_levels = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SpectralSummary> summaries;
  SweepConfig config;
  std::string version;
  double wall_time_seconds = 0.0;
};

/// Eigensystem and rotated perturbation for one (params, lambda, sector)
/// point. The full-space system is assembled from the two parity blocks
/// (exact, since the cross-sector entries of H and H' are structural zeros),
/// merged in ascending energy order; per-sector spectra ride along for the
/// level statistics.
struct PointData {
  spectra::EigenSystem eig;
  fidelity::PerturbationInEigenbasis w;
  std::vector<double> even_levels;
  std::vector<double> odd_levels;
};

PointData prepare_point(const hilbert::DickeParams& params, double lambda, Sector sector,
                        const std::filesystem::path& cache_dir, int max_dim = kDefaultDimGuard);

/// Runs the full (lambda, t, beta) grid: one eigendecomposition and one basis
/// rotation per lambda (cache hits skip the solve), then chi1/chi2 for every
/// (t, beta) pair, plus per-parity-sector spacing statistics. Rows come out
/// in deterministic (lambda, t, beta) order; a solver failure marks the
/// affected rows "failed" and the sweep continues.
SweepResult run_sweep(const SweepConfig& config);

enum class ConvergenceQuantity { GroundEnergy, Chi1 };

struct ConvergenceReport {
  std::vector<int> cutoffs;           // {M/2, 3M/4, M}
  std::vector<double> values;
  std::vector<double> relative_changes;
  bool converged = false;
};

/// Recomputes the chosen quantity at reduced boson cutoffs and flags
/// non-convergence when the last relative change exceeds 1e-3 (ground
/// energy) or 5e-2 (chi1 at the given t, uniform rho).
ConvergenceReport cutoff_convergence_check(const hilbert::DickeParams& p, double lambda,
                                           ConvergenceQuantity quantity, double t = 100.0);

/// CSV with header lambda,t,beta,chi1,chi1_normalized,chi2,dim,sector,status;
/// floats at 17 significant digits, LF endings. Byte-deterministic for a
/// given config.
std::string result_csv(const SweepResult& result);
void write_result_csv(const SweepResult& result, const std::filesystem::path& path);

/// CSV with header lambda,sector,relative_entropy_wigner,ground_energy,n_levels.
std::string summary_csv(const SweepResult& result);
void write_summary_csv(const SweepResult& result, const std::filesystem::path& path);

/// JSON sidecar carrying the echoed config, version, and wall time (the one
/// field that varies between reruns).
void write_metadata_json(const SweepResult& result, const std::filesystem::path& path);

}  // namespace opfid::sweep
