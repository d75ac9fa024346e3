#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "opfid/csv.hpp"
#include "opfid/fidelity.hpp"
#include "opfid/hilbert.hpp"
#include "opfid/plot.hpp"
#include "opfid/rmt.hpp"
#include "opfid/rng.hpp"
#include "opfid/spectra.hpp"
#include "opfid/sweep.hpp"

namespace opfid::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

sweep::Sector parse_sector(const std::string& name) {
  if (name == "full") return sweep::Sector::Full;
  if (name == "even") return sweep::Sector::Even;
  if (name == "odd") return sweep::Sector::Odd;
  throw std::invalid_argument("unknown sector '" + name + "' (expected full|even|odd)");
}

std::vector<std::string> split_on_comma(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream stream(s);
  std::string token;
  while (std::getline(stream, token, ',')) parts.push_back(token);
  return parts;
}

/// "N,M,lambda[,sector]" as used by --dicke.
struct DickeSpec {
  hilbert::DickeParams params;
  double lambda = 0.0;
  sweep::Sector sector = sweep::Sector::Full;
};

DickeSpec parse_dicke_spec(const std::string& text, bool with_sector) {
  const auto parts = split_on_comma(text);
  const std::size_t expected_min = 3;
  const std::size_t expected_max = with_sector ? 4 : 3;
  if (parts.size() < expected_min || parts.size() > expected_max) {
    throw std::invalid_argument("--dicke expects \"N,M,lambda" +
                                std::string(with_sector ? "[,sector]" : "") + "\", got '" + text +
                                "'");
  }
  DickeSpec spec;
  spec.params.n_atoms = std::stoi(parts[0]);
  spec.params.boson_cutoff = std::stoi(parts[1]);
  spec.lambda = std::stod(parts[2]);
  spec.params.coupling = spec.lambda;
  if (with_sector && parts.size() == 4) spec.sector = parse_sector(parts[3]);
  return spec;
}

fs::path derived_path(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_extension();
  return p.string() + suffix;
}

}  // namespace

double parse_beta(const std::string& token) {
  std::string lower = token;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "inf" || lower == "+inf" || lower == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  std::size_t pos = 0;
  const double value = std::stod(token, &pos);
  if (pos != token.size()) throw std::invalid_argument("bad beta value '" + token + "'");
  return value;
}

int run_dicke_sweep(const DickeSweepArgs& args) {
  sweep::SweepConfig config;
  config.dicke.n_atoms = args.n_atoms;
  config.dicke.boson_cutoff = args.boson_cutoff;
  config.dicke.omega = args.omega;
  config.dicke.omega0 = args.omega0;
  config.dicke.rwa = args.rwa;
  config.lambda_grid = {args.lambda_min, args.lambda_max, args.steps};
  config.times = args.times;
  for (const std::string& token : args.betas) config.betas.push_back(parse_beta(token));
  config.sector = parse_sector(args.sector);
  config.normalize = args.normalize;
  config.seed = args.seed;
  config.max_dim = args.dim_guard;
  config.unfold_degree = args.unfold_degree;

  if (!args.cache_dir.empty()) {
    config.cache_dir = args.cache_dir;
  } else if (const char* env = std::getenv("OPFID_CACHE")) {
    config.cache_dir = env;
  }

  const sweep::SweepResult result = sweep::run_sweep(config);

  const fs::path out = args.out;
  sweep::write_result_csv(result, out);
  const fs::path summary_out =
      args.summary_out.empty() ? derived_path(out, "_summary.csv") : fs::path(args.summary_out);
  sweep::write_summary_csv(result, summary_out);
  sweep::write_metadata_json(result, derived_path(out, "_meta.json"));

  if (!args.plot_path.empty()) {
    plot::PlotSpec spec;
    spec.title = "Dicke sweep N=" + std::to_string(args.n_atoms) +
                 " M=" + std::to_string(args.boson_cutoff) + " sector=" + args.sector;
    spec.x_label = "lambda";
    spec.y_label = config.normalize ? "chi1 / max chi1" : "chi1";
    for (double t : config.times) {
      for (double beta : config.betas) {
        plot::Series series;
        series.label = "t=" + fmt6(t) + " beta=" + fmt6(beta);
        for (const sweep::SweepRow& row : result.rows) {
          if (row.t != t || row.beta != beta || row.status != "ok") continue;
          series.x.push_back(row.lambda);
          series.y.push_back(config.normalize ? row.chi1_normalized : row.chi1);
        }
        if (!series.x.empty()) spec.series.push_back(std::move(series));
      }
    }
    plot::render_plot(spec, args.plot_path);
  }

  const sweep::SweepRow* best = nullptr;
  for (const sweep::SweepRow& row : result.rows) {
    if (row.status == "ok" && (best == nullptr || row.chi1 > best->chi1)) best = &row;
  }
  std::cout << "wrote " << result.rows.size() << " rows to " << out.string();
  if (best != nullptr) {
    std::cout << "; max chi1=" << fmt6(best->chi1) << " at lambda=" << fmt6(best->lambda)
              << " (t=" << fmt6(best->t) << ", beta=" << fmt6(best->beta) << ")";
  }
  std::cout << "\n";
  return 0;
}

int run_spacing_stats(const SpacingStatsArgs& args) {
  std::vector<double> levels;
  if (!args.levels_path.empty()) {
    levels = csv::read_column(args.levels_path);
    std::sort(levels.begin(), levels.end());
  } else {
    const DickeSpec spec = parse_dicke_spec(args.dicke, true);
    const sweep::PointData point = sweep::prepare_point(spec.params, spec.lambda, spec.sector, {});
    levels.assign(point.eig.energies.data(), point.eig.energies.data() + point.eig.dim());
  }

  const spectra::SpacingSample sample = spectra::unfold(levels, args.unfold_degree);
  const spectra::Histogram hist = spectra::spacing_histogram(sample.spacings, args.bins, args.smax);

  const auto reference = args.reference == "poisson"
                             ? std::function<double(double)>(spectra::poisson_pdf)
                             : std::function<double(double)>(spectra::wigner_pdf);
  const double entropy = spectra::relative_entropy(hist, reference);

  std::string out = "s_lo,s_hi,density\n";
  for (std::size_t i = 0; i < hist.densities.size(); ++i) {
    out += csv::format_double(hist.edges[i]) + "," + csv::format_double(hist.edges[i + 1]) + "," +
           csv::format_double(hist.densities[i]) + "\n";
  }
  csv::write_text(args.out, out);

  std::cout << "relative_entropy=" << csv::format_double(entropy) << " reference=" << args.reference
            << " n_spacings=" << sample.spacings.size()
            << " overflow_mass=" << csv::format_double(hist.overflow_mass) << "\n";
  return 0;
}

int run_rmt_conjecture(const RmtConjectureArgs& args) {
  rmt::EnsembleSpec spec;
  spec.kind = args.ensemble == "poisson" ? rmt::Ensemble::PoissonDiagonal : rmt::Ensemble::GOE;
  spec.dim = args.dim;
  spec.sigma = 1.0;
  spec.seed = args.seed;

  const std::vector<rmt::EnsembleEstimate> estimates =
      rmt::ensemble_conjecture_experiment(spec, args.times, args.samples);

  std::vector<rmt::EstimateRecord> records;
  for (const rmt::EnsembleEstimate& est : estimates) {
    records.push_back({rmt::to_string(spec.kind), args.dim, est.t, est.n_samples, est.mean,
                       est.std_error, args.seed});
  }
  rmt::write_estimates_csv(records, args.out);
  std::cout << "wrote " << records.size() << " estimates to " << args.out << "\n";
  return 0;
}

int run_rmt_verify_average(const RmtVerifyArgs& args) {
  // Fixed H (one GOE draw) and an independent perturbation stream.
  const rmt::EnsembleSpec h_spec{rmt::Ensemble::GOE, args.dim, 1.0, args.seed};
  const rmt::EnsembleSpec v_spec{rmt::Ensemble::GOE, args.dim, args.sigma,
                                 args.seed ^ 0x9e3779b97f4a7c15ULL};
  const HermitianMatrix h = rmt::sample_matrix(h_spec, 0);
  const spectra::EigenSystem eig = spectra::eigendecompose(h);
  const spectra::StateWeights rho = spectra::uniform_weights(args.dim);

  const auto [chi1_est, chi2_est] = rmt::monte_carlo_avg_chi(h, rho, args.t, v_spec, args.samples);
  const double chi1_ref = rmt::avg_chi1_analytic(eig, rho, args.t, args.sigma);
  const double chi2_ref = rmt::avg_chi2_analytic(rho, args.t, args.sigma);

  const double z1 = (chi1_est.mean - chi1_ref) / chi1_est.std_error;
  const double z2 = (chi2_est.mean - chi2_ref) / chi2_est.std_error;
  std::cout << "chi1: mc=" << csv::format_double(chi1_est.mean)
            << " analytic=" << csv::format_double(chi1_ref)
            << " stderr=" << csv::format_double(chi1_est.std_error) << " z=" << fmt6(z1) << "\n";
  std::cout << "chi2: mc=" << csv::format_double(chi2_est.mean)
            << " analytic=" << csv::format_double(chi2_ref)
            << " stderr=" << csv::format_double(chi2_est.std_error) << " z=" << fmt6(z2) << "\n";

  if (std::abs(z1) > 4.0 || std::abs(z2) > 4.0) {
    std::cerr << "verify-average: Monte Carlo mean deviates from the analytic value by more than "
                 "4 standard errors\n";
    return 1;
  }
  return 0;
}

int run_fidelity_check(const FidelityCheckArgs& args) {
  spectra::EigenSystem eig;
  HermitianMatrix hprime;
  spectra::StateWeights rho;

  if (!args.dicke.empty()) {
    const DickeSpec spec = parse_dicke_spec(args.dicke, false);
    const auto [h, basis] = hilbert::build_dicke_hamiltonian(spec.params);
    hprime = hilbert::build_dicke_derivative(spec.params);
    eig = spectra::eigendecompose(h);
    rho = spectra::uniform_weights(eig.dim());
  } else {
    const rmt::EnsembleSpec spec{rmt::Ensemble::GOE, args.dim, 1.0, args.seed};
    eig = spectra::eigendecompose(rmt::sample_matrix(spec, 0));
    hprime = rmt::sample_matrix(spec, 1);
    rho = spectra::uniform_weights(args.dim);
  }

  const double r1 = fidelity::taylor_residual(eig, hprime, rho, args.t, args.dlambda);
  const double r2 = fidelity::taylor_residual(eig, hprime, rho, args.t, 0.5 * args.dlambda);
  std::cout << "residual(dlambda)=" << csv::format_double(r1)
            << " residual(dlambda/2)=" << csv::format_double(r2);

  if (r1 < 1e-14 && r2 < 1e-14) {
    std::cout << " ratio=n/a (residuals at rounding floor)\n";
    return 0;
  }
  const double ratio = r1 / r2;
  std::cout << " ratio=" << fmt6(ratio) << "\n";
  if (!(ratio >= 4.0 && ratio <= 16.0)) {
    std::cerr << "fidelity-check: residual ratio " << fmt6(ratio)
              << " outside the cubic-scaling window [4, 16]\n";
    return 1;
  }
  return 0;
}

}  // namespace opfid::cli
