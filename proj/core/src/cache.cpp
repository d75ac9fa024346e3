#include "opfid/cache.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <vector>

#include <openssl/evp.h>

static_assert(std::endian::native == std::endian::little,
              "cache files are little-endian; big-endian hosts are unsupported");

namespace opfid::cache {

namespace {

constexpr char kMagic[4] = {'O', 'P', 'F', 'D'};
constexpr std::uint32_t kFormatVersion = 1;

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("cache_key: SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    char buf[3];
    std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::filesystem::path entry_path(const std::filesystem::path& cache_dir, const std::string& key) {
  return cache_dir / (key + ".eig");
}

}  // namespace

std::string cache_key(const hilbert::DickeParams& p, double lambda, std::string_view sector) {
  std::string canonical = "dicke;n_atoms=" + std::to_string(p.n_atoms) +
                          ";boson_cutoff=" + std::to_string(p.boson_cutoff) +
                          ";omega=" + g17(p.omega) + ";omega0=" + g17(p.omega0) +
                          ";rwa=" + (p.rwa ? "1" : "0") + ";lambda=" + g17(lambda) + ";sector=";
  canonical += sector;
  return sha256_hex(canonical);
}

void cache_eigensystem(const std::filesystem::path& cache_dir, const std::string& key,
                       const spectra::EigenSystem& eig) {
  if (eig.vectors.imag().cwiseAbs().maxCoeff() != 0.0) {
    throw std::invalid_argument("cache_eigensystem: eigenvectors must be exactly real");
  }
  std::filesystem::create_directories(cache_dir);

  const std::filesystem::path target = entry_path(cache_dir, key);
  const std::filesystem::path temp = target.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cache_eigensystem: cannot open " + temp.string());

    out.write(kMagic, sizeof(kMagic));
    out.write(reinterpret_cast<const char*>(&kFormatVersion), sizeof(kFormatVersion));
    const std::uint64_t d = static_cast<std::uint64_t>(eig.dim());
    out.write(reinterpret_cast<const char*>(&d), sizeof(d));
    out.write(reinterpret_cast<const char*>(eig.energies.data()),
              static_cast<std::streamsize>(sizeof(double) * d));
    const RealMatrix vectors = eig.vectors.real(); // column-major, matches Eigen storage
    out.write(reinterpret_cast<const char*>(vectors.data()),
              static_cast<std::streamsize>(sizeof(double) * d * d));
    if (!out) throw std::runtime_error("cache_eigensystem: short write to " + temp.string());
  }
  std::filesystem::rename(temp, target); // atomic publish
}

std::optional<spectra::EigenSystem> load_eigensystem(const std::filesystem::path& cache_dir,
                                                     const std::string& key) {
  const std::filesystem::path target = entry_path(cache_dir, key);
  std::ifstream in(target, std::ios::binary);
  if (!in) return std::nullopt;

  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t d = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&d), sizeof(d));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0 || version != kFormatVersion) {
    return std::nullopt;
  }
  if (d == 0 || d > (1u << 20)) return std::nullopt;

  spectra::EigenSystem eig;
  eig.energies.resize(static_cast<Eigen::Index>(d));
  RealMatrix vectors(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  in.read(reinterpret_cast<char*>(eig.energies.data()),
          static_cast<std::streamsize>(sizeof(double) * d));
  in.read(reinterpret_cast<char*>(vectors.data()),
          static_cast<std::streamsize>(sizeof(double) * d * d));
  if (!in || in.gcount() != static_cast<std::streamsize>(sizeof(double) * d * d)) {
    std::cerr << "opfid: cache entry " << target.string()
              << " is truncated; treating as a miss\n";
    return std::nullopt;
  }
  eig.vectors = vectors.cast<Complex>();
  return eig;
}

}  // namespace opfid::cache
