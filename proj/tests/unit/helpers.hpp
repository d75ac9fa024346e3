#pragma once

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "opfid/rmt.hpp"
#include "opfid/rng.hpp"
#include "opfid/types.hpp"

namespace opfid::test {

inline HermitianMatrix random_symmetric(int dim, std::uint64_t seed) {
  return rmt::sample_matrix({rmt::Ensemble::GOE, dim, 1.0, seed}, 0);
}

inline HermitianMatrix random_hermitian(int dim, std::uint64_t seed) {
  return rmt::sample_matrix({rmt::Ensemble::GUE, dim, 1.0, seed}, 0);
}

/// Random normalized probability vector (positive entries).
inline RealVector random_probs(int dim, std::uint64_t seed) {
  Rng rng(seed);
  RealVector p(dim);
  for (int i = 0; i < dim; ++i) p(i) = 0.05 + rng.uniform();
  p /= p.sum();
  return p;
}

/// Kolmogorov-Smirnov distance between sorted samples and a CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> samples, Cdf cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  return d;
}

/// Simpson quadrature on [a, b] with an even number of panels.
template <typename F>
double simpson(F f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) {
    sum += f(a + h * i) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

/// Unique scratch directory under the system temp dir; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("opfid_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace opfid::test
