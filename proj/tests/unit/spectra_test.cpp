#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "helpers.hpp"
#include "opfid/rng.hpp"
#include "opfid/spectra.hpp"

using namespace opfid;
using namespace opfid::spectra;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("eigendecompose: diagonal input sorts ascending") {
  HermitianMatrix h = HermitianMatrix::Zero(3, 3);
  h(0, 0) = 3.0;
  h(1, 1) = 1.0;
  h(2, 2) = 2.0;
  const EigenSystem eig = eigendecompose(h);
  CHECK(eig.energies(0) == doctest::Approx(1.0));
  CHECK(eig.energies(1) == doctest::Approx(2.0));
  CHECK(eig.energies(2) == doctest::Approx(3.0));
  // Vectors are a permuted identity (up to sign).
  CHECK(std::abs(eig.vectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(eig.vectors(2, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(eig.vectors(0, 2)) == doctest::Approx(1.0));
}

TEST_CASE("eigendecompose: 2x2 sigma_x") {
  HermitianMatrix h(2, 2);
  h << 0.0, 1.0, 1.0, 0.0;
  const EigenSystem eig = eigendecompose(h);
  CHECK(eig.energies(0) == doctest::Approx(-1.0));
  CHECK(eig.energies(1) == doctest::Approx(1.0));
}

TEST_CASE("eigendecompose: residual and orthonormality invariants") {
  const HermitianMatrix real_h = test::random_symmetric(50, 42);
  const EigenValidation rv = validate_eigensystem(eigendecompose(real_h), real_h);
  CHECK(rv.orthonormality_error <= 1e-10);
  CHECK(rv.residual_error <= 1e-8);

  const HermitianMatrix complex_h = test::random_hermitian(40, 43);
  const EigenValidation cv = validate_eigensystem(eigendecompose(complex_h), complex_h);
  CHECK(cv.orthonormality_error <= 1e-10);
  CHECK(cv.residual_error <= 1e-8);
}

TEST_CASE("eigendecompose: real input yields exactly real vectors") {
  const EigenSystem eig = eigendecompose(test::random_symmetric(30, 44));
  CHECK(eig.vectors.imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("eigendecompose: rejects non-Hermitian input") {
  HermitianMatrix h(2, 2);
  h << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(eigendecompose(h), std::invalid_argument);
}

TEST_CASE("thermal weights: limits") {
  HermitianMatrix h = HermitianMatrix::Zero(4, 4);
  h(0, 0) = -1.0;
  h(1, 1) = 0.5;
  h(2, 2) = 1.5;
  h(3, 3) = 4.0;
  const EigenSystem eig = eigendecompose(h);

  const StateWeights uniform = thermal_weights(eig, 0.0);
  for (int n = 0; n < 4; ++n) CHECK(uniform.probs(n) == doctest::Approx(0.25));

  const StateWeights ground = thermal_weights(eig, kInf);
  CHECK(ground.probs(0) == doctest::Approx(1.0));
  CHECK(ground.probs.tail(3).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(thermal_weights(eig, -0.1), std::invalid_argument);
}

TEST_CASE("thermal weights: ground-state sentinel splits exact degeneracies") {
  HermitianMatrix h = HermitianMatrix::Zero(3, 3);
  h(0, 0) = 2.0;
  h(1, 1) = 2.0;
  h(2, 2) = 5.0;
  const StateWeights w = thermal_weights(eigendecompose(h), kInf);
  CHECK(w.probs(0) == doctest::Approx(0.5));
  CHECK(w.probs(1) == doctest::Approx(0.5));
  CHECK(w.probs(2) == 0.0);
}

TEST_CASE("thermal weights: normalization and shift invariance") {
  const EigenSystem eig = eigendecompose(test::random_symmetric(24, 45));
  const StateWeights w = thermal_weights(eig, 0.37);
  CHECK(w.probs.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.probs.minCoeff() >= 0.0);

  // Integer energies plus a power-of-two shift keep every E_n + c exact, so
  // the E_0-shift construction reproduces identical weights bitwise.
  HermitianMatrix h = HermitianMatrix::Zero(5, 5);
  for (int n = 0; n < 5; ++n) h(n, n) = n * n - 3.0;
  const EigenSystem base = eigendecompose(h);
  EigenSystem shifted = base;
  shifted.energies.array() += 1024.0;
  const StateWeights wa = thermal_weights(base, 0.25);
  const StateWeights wb = thermal_weights(shifted, 0.25);
  CHECK((wa.probs - wb.probs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("thermal weights: beta from the weight-ratio rule") {
  // A spectrum spanning [e_min, e_max] with beta = -ln(r)/(e_max - e_min)
  // puts the top level at exactly r times the ground weight.
  const double beta = beta_for_weight_ratio(-3.0, 18.0, 0.05);
  CHECK(std::exp(-beta * (18.0 - -3.0)) == doctest::Approx(0.05).epsilon(1e-12));

  HermitianMatrix h = HermitianMatrix::Zero(2, 2);
  h(0, 0) = -3.0;
  h(1, 1) = 18.0;
  const StateWeights w = thermal_weights(eigendecompose(h), beta);
  CHECK(w.probs(1) / w.probs(0) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("delta_t: kernel identities") {
  CHECK(delta_t(0.0, 7.0) == doctest::Approx(49.0));
  CHECK(delta_t(0.0, 0.0) == 0.0);
  const double t = 7.0;
  CHECK(delta_t(2.0 * M_PI / t, t) <= 1e-25);
  CHECK(delta_t(M_PI / t, t) == doctest::Approx(4.0 * t * t / (M_PI * M_PI)).epsilon(1e-12));
}

TEST_CASE("delta_t: evenness, bounds, and zero at t = 0") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const double x = 40.0 * (rng.uniform() - 0.5);
    const double t = 30.0 * rng.uniform();
    const double value = delta_t(x, t);
    CHECK(value == delta_t(-x, t));
    CHECK(value >= 0.0);
    CHECK(value <= t * t);
    CHECK(delta_t(x, 0.0) == 0.0);
  }
}

TEST_CASE("delta_t: series branch is continuous") {
  const double t = 10.0;
  // Just below and above the |x t| = 1e-4 switch.
  const double below = delta_t(0.99e-5, t);
  const double above = delta_t(1.01e-5, t);
  CHECK(below == doctest::Approx(above).epsilon(1e-10));
  CHECK(delta_t(0.5e-5, t) == doctest::Approx(t * t).epsilon(1e-9));
}

TEST_CASE("delta_t: 2 pi normalization by quadrature") {
  CHECK(delta_t_integral_check(50.0, 20.0, 1000001) ==
        doctest::Approx(2.0 * M_PI).epsilon(0.01));
  CHECK(delta_t_integral_check(500.0, 20.0, 2000001) ==
        doctest::Approx(2.0 * M_PI).epsilon(0.002));
  // t^{-1} delta_t(0) grows linearly in t.
  CHECK(delta_t(0.0, 80.0) / 80.0 == doctest::Approx(80.0));
}

TEST_CASE("unfold: equally spaced levels with a linear fit") {
  std::vector<double> levels;
  for (int i = 0; i < 200; ++i) levels.push_back(0.3 * i - 5.0);
  const SpacingSample sample = unfold(levels, 1);
  for (double s : sample.spacings) CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("unfold: affine equivariance of the spacings") {
  const EigenSystem eig = eigendecompose(test::random_symmetric(120, 46));
  std::vector<double> levels(eig.energies.data(), eig.energies.data() + eig.dim());
  std::vector<double> mapped;
  for (double e : levels) mapped.push_back(2.75 * e - 13.0);

  const SpacingSample a = unfold(levels, 5);
  const SpacingSample b = unfold(mapped, 5);
  REQUIRE(a.spacings.size() == b.spacings.size());
  for (std::size_t i = 0; i < a.spacings.size(); ++i) {
    CHECK(a.spacings[i] == doctest::Approx(b.spacings[i]).epsilon(1e-8));
  }
}

TEST_CASE("unfold: GOE sample has unit mean spacing") {
  const EigenSystem eig = eigendecompose(test::random_symmetric(500, 47));
  const std::vector<double> levels(eig.energies.data(), eig.energies.data() + eig.dim());
  const SpacingSample sample = unfold(levels);
  double mean = 0.0;
  for (double s : sample.spacings) mean += s;
  mean /= static_cast<double>(sample.spacings.size());
  CHECK(mean == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unfold: pooled Poisson spacings follow the exponential law") {
  std::vector<double> pooled;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const HermitianMatrix h =
        rmt::sample_matrix({rmt::Ensemble::PoissonDiagonal, 500, 1.0, 48}, k);
    const EigenSystem eig = eigendecompose(h);
    const std::vector<double> levels(eig.energies.data(), eig.energies.data() + eig.dim());
    const SpacingSample sample = unfold(levels);
    pooled.insert(pooled.end(), sample.spacings.begin(), sample.spacings.end());
  }
  const double ks =
      test::ks_statistic(pooled, [](double s) { return s <= 0.0 ? 0.0 : 1.0 - std::exp(-s); });
  CHECK(ks < 0.05);
}

TEST_CASE("unfold: input validation") {
  std::vector<double> tiny = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(unfold(tiny, 10), std::invalid_argument);

  std::vector<double> unsorted = {3.0, 1.0, 2.0};
  CHECK_THROWS_AS(unfold(unsorted, 1), std::invalid_argument);

  // Absurd degree relative to the sample: conditioning guard fires with a
  // lower-degree suggestion.
  std::vector<double> levels;
  for (int i = 0; i < 80; ++i) levels.push_back(i + 0.001 * i * i);
  CHECK_THROWS_WITH_AS(unfold(levels, 60), doctest::Contains("lower degree"),
                       std::invalid_argument);
}

TEST_CASE("reference densities") {
  CHECK(wigner_pdf(0.0) == 0.0);
  CHECK(poisson_pdf(0.0) == doctest::Approx(1.0));
  const double mass = test::simpson(wigner_pdf, 0.0, 16.0, 20000);
  const double mean = test::simpson([](double s) { return s * wigner_pdf(s); }, 0.0, 16.0, 20000);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mean == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("spacing histogram: point mass and empty bins") {
  const std::vector<double> ones(50, 1.0);
  const Histogram hist = spacing_histogram(ones, 8, 4.0);
  CHECK(hist.densities[2] == doctest::Approx(2.0)); // bin [1, 1.5), width 0.5
  CHECK(hist.densities[0] == 0.0);
  CHECK(hist.densities[7] == 0.0);
  CHECK(hist.overflow_mass == 0.0);
}

TEST_CASE("spacing histogram: exponential sample matches bin integrals") {
  Rng rng(91);
  std::vector<double> draws(100000);
  for (double& s : draws) s = rng.exponential();
  const int n_bins = 50;
  const Histogram hist = spacing_histogram(draws, n_bins, 4.0);

  // In-range renormalization: densities integrate to one.
  double mass = 0.0;
  for (int i = 0; i < n_bins; ++i) mass += hist.densities[i] * (hist.edges[i + 1] - hist.edges[i]);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(hist.overflow_mass == doctest::Approx(std::exp(-4.0)).epsilon(0.15));

  const double n = static_cast<double>(draws.size());
  const double in_range = n * (1.0 - hist.overflow_mass);
  for (int i = 0; i < n_bins; ++i) {
    const double width = hist.edges[i + 1] - hist.edges[i];
    const double q = std::exp(-hist.edges[i]) - std::exp(-hist.edges[i + 1]);
    const double expected = n * q;
    const double observed = hist.densities[i] * width * in_range;
    const double sigma = std::sqrt(n * q * (1.0 - q));
    CHECK(std::abs(observed - expected) <= 3.0 * sigma);
  }
}

TEST_CASE("relative entropy: exact zero for matching bin masses") {
  Histogram hist;
  const int n_bins = 40;
  hist.edges.resize(n_bins + 1);
  hist.densities.resize(n_bins);
  for (int i = 0; i <= n_bins; ++i) hist.edges[i] = 0.1 * i;
  for (int i = 0; i < n_bins; ++i) {
    hist.densities[i] = poisson_pdf(0.5 * (hist.edges[i] + hist.edges[i + 1]));
  }
  CHECK(relative_entropy(hist, poisson_pdf) == 0.0);
}

TEST_CASE("relative entropy: self-sample is near zero") {
  Rng rng(92);
  std::vector<double> draws(200000);
  for (double& s : draws) s = rng.exponential();
  const Histogram hist = spacing_histogram(draws);
  CHECK(relative_entropy(hist, poisson_pdf) < 0.02);
}

TEST_CASE("relative entropy: separates GOE from Poisson against Wigner") {
  auto pooled_entropy = [](rmt::Ensemble kind, std::uint64_t seed) {
    std::vector<double> pooled;
    for (std::uint64_t k = 0; k < 6; ++k) {
      const EigenSystem eig = eigendecompose(rmt::sample_matrix({kind, 400, 1.0, seed}, k));
      const std::vector<double> levels(eig.energies.data(), eig.energies.data() + eig.dim());
      const SpacingSample sample = unfold(levels);
      pooled.insert(pooled.end(), sample.spacings.begin(), sample.spacings.end());
    }
    return relative_entropy(spacing_histogram(pooled), wigner_pdf);
  };
  const double goe = pooled_entropy(rmt::Ensemble::GOE, 93);
  const double poisson = pooled_entropy(rmt::Ensemble::PoissonDiagonal, 94);
  CHECK(poisson >= 5.0 * goe);
}
