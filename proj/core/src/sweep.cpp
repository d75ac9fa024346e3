#include "opfid/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "opfid/cache.hpp"
#include "opfid/csv.hpp"

namespace opfid::sweep {

std::string to_string(Sector s) {
  switch (s) {
    case Sector::Full: return "full";
    case Sector::Even: return "even";
    case Sector::Odd: return "odd";
  }
  return "unknown";
}

std::vector<double> LambdaGrid::values() const {
  if (steps < 2) throw std::invalid_argument("LambdaGrid: steps must be >= 2");
  if (!(min < max)) throw std::invalid_argument("LambdaGrid: need min < max");
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    out[static_cast<std::size_t>(i)] = min + (max - min) * i / (steps - 1);
  }
  return out;
}

namespace {

spectra::EigenSystem cached_eigendecompose(const HermitianMatrix& block,
                                           const hilbert::DickeParams& params, double lambda,
                                           const std::string& sector_name,
                                           const std::filesystem::path& cache_dir) {
  if (!cache_dir.empty()) {
    const std::string key = cache::cache_key(params, lambda, sector_name);
    if (auto hit = cache::load_eigensystem(cache_dir, key)) {
      if (hit->dim() == block.rows()) return std::move(*hit);
      std::cerr << "opfid: cache entry " << key << " has wrong dimension; recomputing\n";
    }
    spectra::EigenSystem eig = spectra::eigendecompose(block);
    try {
      cache::cache_eigensystem(cache_dir, key, eig);
    } catch (const std::exception& e) {
      std::cerr << "opfid: cache write failed (" << e.what() << "); continuing uncached\n";
    }
    return eig;
  }
  return spectra::eigendecompose(block);
}

std::vector<double> to_levels(const RealVector& energies) {
  return {energies.data(), energies.data() + energies.size()};
}

}  // namespace

PointData prepare_point(const hilbert::DickeParams& params, double lambda, Sector sector,
                        const std::filesystem::path& cache_dir, int max_dim) {
  hilbert::DickeParams p = params;
  p.coupling = lambda;

  const auto [h, basis] = hilbert::build_dicke_hamiltonian(p, max_dim);
  const HermitianMatrix hprime = hilbert::build_dicke_derivative(p, max_dim);
  const hilbert::ParityBlocks h_blocks = hilbert::parity_split(h, basis);
  const hilbert::ParityBlocks hp_blocks = hilbert::parity_split(hprime, basis);

  PointData point;
  if (sector == Sector::Even || sector == Sector::Odd) {
    const bool even = sector == Sector::Even;
    point.eig = cached_eigendecompose(even ? h_blocks.even : h_blocks.odd, p, lambda,
                                      to_string(sector), cache_dir);
    point.w = fidelity::perturbation_in_eigenbasis(point.eig, even ? hp_blocks.even : hp_blocks.odd);
    (even ? point.even_levels : point.odd_levels) = to_levels(point.eig.energies);
    return point;
  }

  // Full space, assembled from the parity blocks: the cross-sector entries of
  // both H and H' are structural zeros, so the block eigenvectors embedded at
  // their parent indices form an exact full-space eigenbasis.
  const spectra::EigenSystem eig_even =
      cached_eigendecompose(h_blocks.even, p, lambda, "even", cache_dir);
  const spectra::EigenSystem eig_odd =
      cached_eigendecompose(h_blocks.odd, p, lambda, "odd", cache_dir);
  point.even_levels = to_levels(eig_even.energies);
  point.odd_levels = to_levels(eig_odd.energies);

  const int d_even = eig_even.dim();
  const int d_odd = eig_odd.dim();
  const int d = d_even + d_odd;

  struct Entry {
    double energy;
    int sector; // 0 even, 1 odd
    int pos;
  };
  std::vector<Entry> order;
  order.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d_even; ++i) order.push_back({eig_even.energies(i), 0, i});
  for (int i = 0; i < d_odd; ++i) order.push_back({eig_odd.energies(i), 1, i});
  std::stable_sort(order.begin(), order.end(),
                   [](const Entry& a, const Entry& b) { return a.energy < b.energy; });

  point.eig.energies.resize(d);
  point.eig.vectors = Eigen::MatrixXcd::Zero(d, d);
  std::vector<int> merged_pos_even(static_cast<std::size_t>(d_even));
  std::vector<int> merged_pos_odd(static_cast<std::size_t>(d_odd));
  for (int k = 0; k < d; ++k) {
    const Entry& e = order[static_cast<std::size_t>(k)];
    point.eig.energies(k) = e.energy;
    const auto& indices = e.sector == 0 ? h_blocks.even_indices : h_blocks.odd_indices;
    const auto& vectors = e.sector == 0 ? eig_even.vectors : eig_odd.vectors;
    for (std::size_t r = 0; r < indices.size(); ++r) {
      point.eig.vectors(indices[r], k) = vectors(static_cast<Eigen::Index>(r), e.pos);
    }
    (e.sector == 0 ? merged_pos_even : merged_pos_odd)[static_cast<std::size_t>(e.pos)] = k;
  }

  const fidelity::PerturbationInEigenbasis w_even =
      fidelity::perturbation_in_eigenbasis(eig_even, hp_blocks.even);
  const fidelity::PerturbationInEigenbasis w_odd =
      fidelity::perturbation_in_eigenbasis(eig_odd, hp_blocks.odd);
  point.w = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d_even; ++i) {
    for (int k = 0; k < d_even; ++k) {
      point.w(merged_pos_even[static_cast<std::size_t>(i)],
              merged_pos_even[static_cast<std::size_t>(k)]) = w_even(i, k);
    }
  }
  for (int i = 0; i < d_odd; ++i) {
    for (int k = 0; k < d_odd; ++k) {
      point.w(merged_pos_odd[static_cast<std::size_t>(i)],
              merged_pos_odd[static_cast<std::size_t>(k)]) = w_odd(i, k);
    }
  }
  return point;
}

namespace {

SpectralSummary make_summary(double lambda, const std::string& sector_name,
                             const std::vector<double>& levels, int unfold_degree) {
  SpectralSummary summary;
  summary.lambda = lambda;
  summary.sector = sector_name;
  summary.n_levels = static_cast<int>(levels.size());
  summary.ground_energy = levels.empty() ? std::numeric_limits<double>::quiet_NaN() : levels.front();
  try {
    const spectra::SpacingSample sample = spectra::unfold(levels, unfold_degree);
    const spectra::Histogram hist = spectra::spacing_histogram(sample.spacings);
    summary.relative_entropy_wigner = spectra::relative_entropy(hist, spectra::wigner_pdf);
  } catch (const std::exception&) {
    // Too few levels for an unfolding fit: statistics undefined at this size.
    summary.relative_entropy_wigner = std::numeric_limits<double>::quiet_NaN();
  }
  return summary;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.times.empty()) throw std::invalid_argument("run_sweep: times must be non-empty");
  if (config.betas.empty()) throw std::invalid_argument("run_sweep: betas must be non-empty");
  for (double beta : config.betas) {
    if (std::isnan(beta) || beta < 0.0) throw std::invalid_argument("run_sweep: beta must be >= 0");
  }
  hilbert::validate(config.dicke);
  const std::vector<double> lambdas = config.lambda_grid.values();

  // Fail early on dimension, before the per-lambda loop starts.
  const int dim_full = hilbert::make_product_basis(config.dicke).dim();
  if (dim_full > config.max_dim) {
    throw std::invalid_argument("run_sweep: dimension " + std::to_string(dim_full) +
                                " exceeds max_dim " + std::to_string(config.max_dim));
  }

  const std::size_t n_lambda = lambdas.size();
  const std::size_t n_times = config.times.size();
  const std::size_t n_betas = config.betas.size();
  const std::size_t rows_per_lambda = n_times * n_betas;

  SweepResult result;
  result.config = config;
  result.version = kVersion;
  result.rows.resize(n_lambda * rows_per_lambda);
  std::vector<std::vector<SpectralSummary>> summaries_by_lambda(n_lambda);

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t li = 0; li < static_cast<std::ptrdiff_t>(n_lambda); ++li) {
    const double lambda = lambdas[static_cast<std::size_t>(li)];
    SweepRow* rows = result.rows.data() + static_cast<std::size_t>(li) * rows_per_lambda;

    try {
      const PointData point =
          prepare_point(config.dicke, lambda, config.sector, config.cache_dir, config.max_dim);

      std::size_t r = 0;
      for (double t : config.times) {
        for (double beta : config.betas) {
          const spectra::StateWeights rho = spectra::thermal_weights(point.eig, beta);
          SweepRow& row = rows[r++];
          row.lambda = lambda;
          row.t = t;
          row.beta = beta;
          row.dim = point.eig.dim();
          row.sector = config.sector;
          row.chi1 = fidelity::chi1(point.eig, point.w, rho, t);
          row.chi2 = fidelity::chi2(point.w, rho, t);
          row.status = "ok";
        }
      }

      auto& summaries = summaries_by_lambda[static_cast<std::size_t>(li)];
      if (!point.even_levels.empty()) {
        summaries.push_back(make_summary(lambda, "even", point.even_levels, config.unfold_degree));
      }
      if (!point.odd_levels.empty()) {
        summaries.push_back(make_summary(lambda, "odd", point.odd_levels, config.unfold_degree));
      }
    } catch (const std::exception& e) {
#pragma omp critical
      std::cerr << "opfid: sweep point lambda=" << lambda << " failed: " << e.what() << "\n";
      std::size_t r = 0;
      for (double t : config.times) {
        for (double beta : config.betas) {
          SweepRow& row = rows[r++];
          row.lambda = lambda;
          row.t = t;
          row.beta = beta;
          row.dim = dim_full;
          row.sector = config.sector;
          row.chi1 = std::numeric_limits<double>::quiet_NaN();
          row.chi2 = std::numeric_limits<double>::quiet_NaN();
          row.status = "failed";
        }
      }
    }
  }

  for (auto& summaries : summaries_by_lambda) {
    result.summaries.insert(result.summaries.end(), summaries.begin(), summaries.end());
  }

  // Per-(t, beta) normalization of chi1 over the lambda grid.
  for (std::size_t it = 0; it < n_times; ++it) {
    for (std::size_t ib = 0; ib < n_betas; ++ib) {
      double group_max = 0.0;
      for (std::size_t li = 0; li < n_lambda; ++li) {
        const SweepRow& row = result.rows[li * rows_per_lambda + it * n_betas + ib];
        if (row.status == "ok") group_max = std::max(group_max, row.chi1);
      }
      for (std::size_t li = 0; li < n_lambda; ++li) {
        SweepRow& row = result.rows[li * rows_per_lambda + it * n_betas + ib];
        if (row.status != "ok") {
          row.chi1_normalized = std::numeric_limits<double>::quiet_NaN();
        } else if (!config.normalize || group_max <= 0.0) {
          row.chi1_normalized = config.normalize ? 0.0 : row.chi1;
        } else {
          row.chi1_normalized = row.chi1 / group_max;
        }
      }
    }
  }

  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

ConvergenceReport cutoff_convergence_check(const hilbert::DickeParams& p, double lambda,
                                           ConvergenceQuantity quantity, double t) {
  if (p.boson_cutoff < 8) {
    throw std::invalid_argument("cutoff_convergence_check: boson_cutoff must be >= 8");
  }

  ConvergenceReport report;
  report.cutoffs = {p.boson_cutoff / 2, 3 * p.boson_cutoff / 4, p.boson_cutoff};
  for (int cutoff : report.cutoffs) {
    hilbert::DickeParams reduced = p;
    reduced.boson_cutoff = cutoff;
    reduced.coupling = lambda;
    if (quantity == ConvergenceQuantity::GroundEnergy) {
      const auto [h, basis] = hilbert::build_dicke_hamiltonian(reduced);
      Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(h, Eigen::EigenvaluesOnly);
      if (solver.info() != Eigen::Success) {
        throw std::runtime_error("cutoff_convergence_check: eigenvalue solve failed");
      }
      report.values.push_back(solver.eigenvalues()(0));
    } else {
      const PointData point = prepare_point(reduced, lambda, Sector::Full, {});
      const spectra::StateWeights rho = spectra::uniform_weights(point.eig.dim());
      report.values.push_back(fidelity::chi1(point.eig, point.w, rho, t));
    }
  }

  for (std::size_t i = 0; i + 1 < report.values.size(); ++i) {
    const double denom = std::max(std::abs(report.values[i + 1]), 1e-300);
    report.relative_changes.push_back(std::abs(report.values[i + 1] - report.values[i]) / denom);
  }
  const double threshold = quantity == ConvergenceQuantity::GroundEnergy ? 1e-3 : 5e-2;
  report.converged = report.relative_changes.back() <= threshold;
  return report;
}

std::string result_csv(const SweepResult& result) {
  std::string out = "lambda,t,beta,chi1,chi1_normalized,chi2,dim,sector,status\n";
  for (const SweepRow& row : result.rows) {
    out += csv::format_double(row.lambda);
    out += ',';
    out += csv::format_double(row.t);
    out += ',';
    out += csv::format_double(row.beta);
    out += ',';
    out += csv::format_double(row.chi1);
    out += ',';
    out += csv::format_double(row.chi1_normalized);
    out += ',';
    out += csv::format_double(row.chi2);
    out += ',';
    out += std::to_string(row.dim);
    out += ',';
    out += to_string(row.sector);
    out += ',';
    out += row.status;
    out += '\n';
  }
  return out;
}

void write_result_csv(const SweepResult& result, const std::filesystem::path& path) {
  csv::write_text(path, result_csv(result));
}

std::string summary_csv(const SweepResult& result) {
  std::string out = "lambda,sector,relative_entropy_wigner,ground_energy,n_levels\n";
  for (const SpectralSummary& s : result.summaries) {
    out += csv::format_double(s.lambda);
    out += ',';
    out += s.sector;
    out += ',';
    out += csv::format_double(s.relative_entropy_wigner);
    out += ',';
    out += csv::format_double(s.ground_energy);
    out += ',';
    out += std::to_string(s.n_levels);
    out += '\n';
  }
  return out;
}

void write_summary_csv(const SweepResult& result, const std::filesystem::path& path) {
  csv::write_text(path, summary_csv(result));
}

void write_metadata_json(const SweepResult& result, const std::filesystem::path& path) {
  nlohmann::json betas = nlohmann::json::array();
  for (double beta : result.config.betas) betas.push_back(csv::format_double(beta));

  const nlohmann::json doc = {
      {"version", result.version},
      {"wall_time_seconds", result.wall_time_seconds},
      {"config",
       {{"n_atoms", result.config.dicke.n_atoms},
        {"boson_cutoff", result.config.dicke.boson_cutoff},
        {"omega", result.config.dicke.omega},
        {"omega0", result.config.dicke.omega0},
        {"rwa", result.config.dicke.rwa},
        {"lambda_min", result.config.lambda_grid.min},
        {"lambda_max", result.config.lambda_grid.max},
        {"lambda_steps", result.config.lambda_grid.steps},
        {"times", result.config.times},
        {"betas", betas},
        {"sector", to_string(result.config.sector)},
        {"normalize", result.config.normalize},
        {"cache_dir", result.config.cache_dir.string()},
        {"seed", result.config.seed},
        {"max_dim", result.config.max_dim},
        {"unfold_degree", result.config.unfold_degree}}}};
  csv::write_text(path, doc.dump(2) + "\n");
}

}  // namespace opfid::sweep
