#include "opfid/types.hpp"

#include <cstdio>
#include <stdexcept>

namespace opfid {

double max_abs(const HermitianMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs(const RealMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const HermitianMatrix& m, double rtol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(max_abs(m), 1e-300);
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= rtol * scale;
}

void require_hermitian(const HermitianMatrix& m, double rtol, const std::string& what) {
  if (!is_hermitian(m, rtol)) {
    throw std::invalid_argument(what + ": matrix is not Hermitian within tolerance (" +
                                matrix_fingerprint(m) + ")");
  }
}

namespace {

std::uint64_t fnv1a(const unsigned char* data, std::size_t n) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string matrix_fingerprint(const HermitianMatrix& m) {
  const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
  const std::uint64_t h = fnv1a(bytes, sizeof(Complex) * static_cast<std::size_t>(m.size()));
  char buf[96];
  std::snprintf(buf, sizeof(buf), "dim=%ld maxabs=%.6g hash=%016llx", static_cast<long>(m.rows()),
                max_abs(m), static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace opfid
