#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "opfid/types.hpp"

// Exit codes: 0 success, 1 runtime failure, 2 usage error.

int main(int argc, char** argv) {
  using namespace opfid::cli;

  CLI::App app{"operator-fidelity chaos diagnostics"};
  app.set_version_flag("--version", opfid::kVersion);
  app.require_subcommand(1);

  std::function<int()> action;

  DickeSweepArgs sweep_args;
  CLI::App* sweep_cmd = app.add_subcommand(
      "dicke-sweep", "sweep chi1/chi2 of the Dicke model over a coupling grid");
  sweep_cmd->add_option("--n-atoms", sweep_args.n_atoms, "number of atoms N (j = N/2)")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--boson-cutoff", sweep_args.boson_cutoff, "retained Fock levels M")
      ->check(CLI::Range(2, 1 << 20));
  sweep_cmd->add_option("--omega", sweep_args.omega, "boson frequency");
  sweep_cmd->add_option("--omega0", sweep_args.omega0, "atomic splitting");
  sweep_cmd->add_flag("--rwa", sweep_args.rwa, "rotating-wave approximation");
  sweep_cmd->add_option("--lambda-min", sweep_args.lambda_min, "grid start");
  sweep_cmd->add_option("--lambda-max", sweep_args.lambda_max, "grid end");
  sweep_cmd->add_option("--steps", sweep_args.steps, "grid points")->check(CLI::Range(2, 100000));
  sweep_cmd->add_option("--times", sweep_args.times, "comma-separated times t")->delimiter(',');
  sweep_cmd->add_option("--beta", sweep_args.betas, "comma-separated betas (0, finite, or inf)")
      ->delimiter(',');
  sweep_cmd->add_option("--sector", sweep_args.sector, "full|even|odd")
      ->check(CLI::IsMember({"full", "even", "odd"}));
  sweep_cmd->add_flag("--normalize,!--no-normalize", sweep_args.normalize,
                      "divide chi1 by its max over lambda per (t, beta)");
  sweep_cmd->add_option("--out", sweep_args.out, "result CSV path")->required();
  sweep_cmd->add_option("--plot", sweep_args.plot_path, "optional SVG plot path");
  sweep_cmd->add_option("--cache", sweep_args.cache_dir,
                        "eigensystem cache directory (default: $OPFID_CACHE)");
  sweep_cmd->add_option("--summary-out", sweep_args.summary_out,
                        "spectral summary CSV (default: <out>_summary.csv)");
  sweep_cmd->add_option("--seed", sweep_args.seed, "recorded in metadata");
  sweep_cmd->add_option("--dim-guard", sweep_args.dim_guard, "max Hilbert dimension");
  sweep_cmd->add_option("--unfold-degree", sweep_args.unfold_degree, "staircase fit degree");
  sweep_cmd->callback([&]() { action = [&]() { return run_dicke_sweep(sweep_args); }; });

  SpacingStatsArgs stats_args;
  CLI::App* stats_cmd =
      app.add_subcommand("spacing-stats", "unfold a spectrum and compare P(S) to a reference");
  CLI::Option* levels_opt =
      stats_cmd->add_option("--levels", stats_args.levels_path, "single-column CSV of levels");
  stats_cmd->add_option("--dicke", stats_args.dicke, "\"N,M,lambda,sector\" Dicke spectrum")
      ->excludes(levels_opt);
  stats_cmd->add_option("--unfold-degree", stats_args.unfold_degree, "staircase fit degree");
  stats_cmd->add_option("--bins", stats_args.bins, "histogram bins")->check(CLI::Range(5, 100000));
  stats_cmd->add_option("--smax", stats_args.smax, "histogram upper edge")
      ->check(CLI::PositiveNumber);
  stats_cmd->add_option("--reference", stats_args.reference, "wigner|poisson")
      ->check(CLI::IsMember({"wigner", "poisson"}));
  stats_cmd->add_option("--out", stats_args.out, "histogram CSV path")->required();
  stats_cmd->callback([&]() {
    if (stats_args.levels_path.empty() && stats_args.dicke.empty()) {
      throw CLI::RequiredError("spacing-stats: one of --levels or --dicke");
    }
    action = [&]() { return run_spacing_stats(stats_args); };
  });

  CLI::App* rmt_cmd = app.add_subcommand("rmt", "random-matrix experiments");
  rmt_cmd->require_subcommand(1);

  RmtConjectureArgs conj_args;
  CLI::App* conj_cmd = rmt_cmd->add_subcommand(
      "conjecture", "ensemble mean of chi1/t for regular vs chaotic spectra");
  conj_cmd->add_option("--ensemble", conj_args.ensemble, "goe|poisson")
      ->check(CLI::IsMember({"goe", "poisson"}));
  conj_cmd->add_option("--dim", conj_args.dim, "matrix dimension")->check(CLI::Range(2, 100000));
  conj_cmd->add_option("--samples", conj_args.samples, "number of sampled Hamiltonians");
  conj_cmd->add_option("--times", conj_args.times, "comma-separated times")->delimiter(',');
  conj_cmd->add_option("--seed", conj_args.seed, "RNG seed");
  conj_cmd->add_option("--out", conj_args.out, "estimates CSV path")->required();
  conj_cmd->callback([&]() { action = [&]() { return run_rmt_conjecture(conj_args); }; });

  RmtVerifyArgs verify_args;
  CLI::App* verify_cmd = rmt_cmd->add_subcommand(
      "verify-average", "Monte Carlo vs analytic perturbation-averaged chi");
  verify_cmd->add_option("--dim", verify_args.dim, "matrix dimension")
      ->check(CLI::Range(2, 100000));
  verify_cmd->add_option("--samples", verify_args.samples, "perturbation draws");
  verify_cmd->add_option("--t", verify_args.t, "evolution time");
  verify_cmd->add_option("--sigma", verify_args.sigma, "perturbation strength")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify_args.seed, "RNG seed");
  verify_cmd->callback([&]() { action = [&]() { return run_rmt_verify_average(verify_args); }; });

  FidelityCheckArgs fid_args;
  CLI::App* fid_cmd = app.add_subcommand(
      "fidelity-check", "cubic-scaling check of the exact fidelity against chi1 + chi2");
  fid_cmd->add_option("--dim", fid_args.dim, "dimension of the random pair")
      ->check(CLI::Range(2, 100000));
  fid_cmd->add_option("--t", fid_args.t, "evolution time");
  fid_cmd->add_option("--dlambda", fid_args.dlambda, "expansion step")
      ->check(CLI::PositiveNumber);
  fid_cmd->add_option("--seed", fid_args.seed, "RNG seed");
  fid_cmd->add_option("--dicke", fid_args.dicke, "\"N,M,lambda\" Dicke instance instead");
  fid_cmd->callback([&]() { action = [&]() { return run_fidelity_check(fid_args); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action ? action() : 2;
  } catch (const std::exception& e) {
    std::cerr << "opfid: error: " << e.what() << "\n";
    return 1;
  }
}
