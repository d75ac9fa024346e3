#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opfid/types.hpp"

namespace opfid::cli {

struct DickeSweepArgs {
  int n_atoms = 8;
  int boson_cutoff = 48;
  double omega = 1.0;
  double omega0 = 1.0;
  bool rwa = false;
  double lambda_min = 0.05;
  double lambda_max = 1.0;
  int steps = 60;
  std::vector<double> times = {1.0, 10.0, 100.0, 1000.0};
  std::vector<std::string> betas = {"0"};
  std::string sector = "full";
  bool normalize = true;
  std::string out;
  std::string plot_path;
  std::string cache_dir;
  std::string summary_out;
  std::uint64_t seed = 0;
  int dim_guard = kDefaultDimGuard;
  int unfold_degree = 10;
};

struct SpacingStatsArgs {
  std::string levels_path;
  std::string dicke; // "N,M,lambda,sector"
  int unfold_degree = 10;
  int bins = 50;
  double smax = 4.0;
  std::string reference = "wigner";
  std::string out;
};

struct RmtConjectureArgs {
  std::string ensemble = "goe";
  int dim = 200;
  int samples = 100;
  std::vector<double> times = {50.0, 200.0, 400.0};
  std::uint64_t seed = 0;
  std::string out;
};

struct RmtVerifyArgs {
  int dim = 32;
  int samples = 500;
  double t = 5.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

struct FidelityCheckArgs {
  int dim = 30;
  double t = 3.0;
  double dlambda = 1e-3;
  std::uint64_t seed = 0;
  std::string dicke; // "N,M,lambda"
};

int run_dicke_sweep(const DickeSweepArgs& args);
int run_spacing_stats(const SpacingStatsArgs& args);
int run_rmt_conjecture(const RmtConjectureArgs& args);
int run_rmt_verify_average(const RmtVerifyArgs& args);
int run_fidelity_check(const FidelityCheckArgs& args);

/// "inf" (any case) maps to the ground-state sentinel; otherwise strtod.
double parse_beta(const std::string& token);

}  // namespace opfid::cli
