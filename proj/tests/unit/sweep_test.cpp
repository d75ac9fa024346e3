#include <doctest.h>

#include <cmath>
#include <fstream>

#include "helpers.hpp"
#include "opfid/cache.hpp"
#include "opfid/fidelity.hpp"
#include "opfid/spectra.hpp"
#include "opfid/sweep.hpp"

using namespace opfid;
using namespace opfid::sweep;

namespace {

SweepConfig tiny_config() {
  SweepConfig config;
  config.dicke.n_atoms = 2;
  config.dicke.boson_cutoff = 6;
  config.lambda_grid = {0.0, 0.5, 2};
  config.times = {3.0};
  config.betas = {0.0};
  return config;
}

}  // namespace

TEST_CASE("run_sweep: cardinality and row order") {
  SweepConfig config = tiny_config();
  config.times = {1.0, 5.0};
  config.betas = {0.0, 0.2};
  const SweepResult result = run_sweep(config);
  REQUIRE(result.rows.size() == 2 * 2 * 2);

  std::size_t r = 0;
  for (double lambda : config.lambda_grid.values()) {
    for (double t : config.times) {
      for (double beta : config.betas) {
        CHECK(result.rows[r].lambda == lambda);
        CHECK(result.rows[r].t == t);
        CHECK(result.rows[r].beta == beta);
        CHECK(result.rows[r].status == "ok");
        ++r;
      }
    }
  }
}

TEST_CASE("run_sweep: orchestration adds nothing to chi1") {
  SweepConfig config = tiny_config();
  const SweepResult result = run_sweep(config);

  // Recompute the lambda = 0 row through the same public pipeline.
  const PointData point = prepare_point(config.dicke, 0.0, Sector::Full, {});
  const spectra::StateWeights rho = spectra::thermal_weights(point.eig, 0.0);
  const double direct = fidelity::chi1(point.eig, point.w, rho, 3.0);
  CHECK(result.rows.front().chi1 == direct); // bit-identical
}

TEST_CASE("run_sweep: full sector merges the parity blocks exactly") {
  hilbert::DickeParams p;
  p.n_atoms = 3;
  p.boson_cutoff = 10;
  const PointData point = prepare_point(p, 0.45, Sector::Full, {});

  const auto [h, basis] = hilbert::build_dicke_hamiltonian(
      [&] { auto q = p; q.coupling = 0.45; return q; }());
  const spectra::EigenValidation v = spectra::validate_eigensystem(point.eig, h);
  CHECK(v.orthonormality_error <= 1e-10);
  CHECK(v.residual_error <= 1e-8);
  CHECK(std::is_sorted(point.eig.energies.data(), point.eig.energies.data() + point.eig.dim()));

  // W agrees with a direct full-space rotation.
  const HermitianMatrix hp = hilbert::build_dicke_derivative(p);
  const auto w_direct = fidelity::perturbation_in_eigenbasis(point.eig, hp);
  CHECK(max_abs(HermitianMatrix(w_direct - point.w)) <= 1e-10 * max_abs(hp));
}

TEST_CASE("run_sweep: normalization marks exactly one row per group") {
  SweepConfig config = tiny_config();
  config.lambda_grid = {0.1, 0.9, 5};
  config.times = {2.0, 50.0};
  config.normalize = true;
  const SweepResult result = run_sweep(config);

  for (double t : config.times) {
    int at_max = 0;
    for (const SweepRow& row : result.rows) {
      if (row.t != t) continue;
      CHECK(row.chi1_normalized >= 0.0);
      CHECK(row.chi1_normalized <= 1.0);
      if (row.chi1_normalized == 1.0) ++at_max;
    }
    CHECK(at_max == 1);
  }
}

TEST_CASE("run_sweep: deterministic CSV bytes") {
  SweepConfig config = tiny_config();
  config.lambda_grid = {0.05, 0.8, 4};
  const std::string a = result_csv(run_sweep(config));
  const std::string b = result_csv(run_sweep(config));
  CHECK(a == b);
  CHECK(a.substr(0, a.find('\n')) ==
        "lambda,t,beta,chi1,chi1_normalized,chi2,dim,sector,status");
}

TEST_CASE("run_sweep: even sector alone") {
  SweepConfig config = tiny_config();
  config.sector = Sector::Even;
  const SweepResult result = run_sweep(config);
  for (const SweepRow& row : result.rows) {
    CHECK(row.sector == Sector::Even);
    CHECK(row.dim < config.dicke.dim());
  }
  for (const auto& summary : result.summaries) CHECK(summary.sector == "even");
}

TEST_CASE("cutoff convergence: non-interacting ground energy is cutoff-free") {
  hilbert::DickeParams p;
  p.n_atoms = 4;
  p.boson_cutoff = 16;
  const ConvergenceReport report =
      cutoff_convergence_check(p, 0.0, ConvergenceQuantity::GroundEnergy);
  REQUIRE(report.cutoffs.size() == 3);
  CHECK(report.cutoffs[0] == 8);
  CHECK(report.cutoffs[2] == 16);
  for (double change : report.relative_changes) CHECK(change == 0.0);
  CHECK(report.converged);
}

TEST_CASE("cutoff convergence: desk-scale instance has a converged ground energy") {
  hilbert::DickeParams p;
  p.n_atoms = 8;
  p.boson_cutoff = 48;
  const ConvergenceReport report =
      cutoff_convergence_check(p, 0.4, ConvergenceQuantity::GroundEnergy);
  CHECK(report.relative_changes.back() < 1e-3);
  CHECK(report.converged);
}

TEST_CASE("cutoff convergence: strong coupling with a tiny cutoff is flagged") {
  hilbert::DickeParams p;
  p.n_atoms = 4;
  p.boson_cutoff = 8;
  const ConvergenceReport report =
      cutoff_convergence_check(p, 2.0, ConvergenceQuantity::GroundEnergy);
  CHECK_FALSE(report.converged);
}

TEST_CASE("cache: round trip is bit-identical") {
  test::TempDir dir("cache");
  hilbert::DickeParams p;
  p.n_atoms = 2;
  p.boson_cutoff = 5;
  p.coupling = 0.3;
  const auto [h, basis] = hilbert::build_dicke_hamiltonian(p);
  const spectra::EigenSystem eig = spectra::eigendecompose(h);

  const std::string key = cache::cache_key(p, 0.3, "full");
  cache::cache_eigensystem(dir.path(), key, eig);
  const auto loaded = cache::load_eigensystem(dir.path(), key);
  REQUIRE(loaded.has_value());
  CHECK((loaded->energies - eig.energies).cwiseAbs().maxCoeff() == 0.0);
  CHECK(max_abs(HermitianMatrix(loaded->vectors - eig.vectors)) == 0.0);
}

TEST_CASE("cache: key separates nearby lambdas and sectors") {
  hilbert::DickeParams p;
  p.n_atoms = 2;
  p.boson_cutoff = 5;
  const std::string a = cache::cache_key(p, 0.3, "even");
  CHECK(a != cache::cache_key(p, 0.3 + 1e-12, "even"));
  CHECK(a != cache::cache_key(p, 0.3, "odd"));
  auto q = p;
  q.boson_cutoff = 6;
  CHECK(a != cache::cache_key(q, 0.3, "even"));
}

TEST_CASE("cache: foreign and truncated files are misses") {
  test::TempDir dir("cachemiss");
  const std::string key(64, 'a');

  CHECK_FALSE(cache::load_eigensystem(dir.path(), key).has_value());

  {
    std::ofstream out(dir.path() / (key + ".eig"), std::ios::binary);
    out << "not an eigensystem";
  }
  CHECK_FALSE(cache::load_eigensystem(dir.path(), key).has_value());

  // Valid header, truncated payload.
  hilbert::DickeParams p;
  p.n_atoms = 2;
  p.boson_cutoff = 5;
  const auto [h, basis] = hilbert::build_dicke_hamiltonian(p);
  const spectra::EigenSystem eig = spectra::eigendecompose(h);
  cache::cache_eigensystem(dir.path(), key, eig);
  const auto path = dir.path() / (key + ".eig");
  std::filesystem::resize_file(path, std::filesystem::file_size(path) / 2);
  CHECK_FALSE(cache::load_eigensystem(dir.path(), key).has_value());
}

TEST_CASE("run_sweep: warm cache reproduces cold-cache bytes") {
  test::TempDir dir("sweepcache");
  SweepConfig config = tiny_config();
  config.cache_dir = dir.path();
  const std::string cold = result_csv(run_sweep(config));
  const std::string warm = result_csv(run_sweep(config));
  CHECK(cold == warm);
}

TEST_CASE("metadata json: config echo with infinite beta") {
  test::TempDir dir("meta");
  SweepConfig config = tiny_config();
  config.betas = {0.0, std::numeric_limits<double>::infinity()};
  const SweepResult result = run_sweep(config);
  const auto path = dir.path() / "meta.json";
  write_metadata_json(result, path);
  const std::string text = test::read_file(path);
  CHECK(text.find("\"inf\"") != std::string::npos);
  CHECK(text.find("\"n_atoms\": 2") != std::string::npos);
  CHECK(text.find("wall_time_seconds") != std::string::npos);
}
