#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "opfid/hilbert.hpp"
#include "opfid/spectra.hpp"

namespace opfid::cache {

/// Content key for an eigendecomposition: SHA-256 (hex) of the canonicalized
/// parameters. Floats are canonicalized to 17 significant digits, so a 1e-12
/// change of lambda yields a different key.
std::string cache_key(const hilbert::DickeParams& p, double lambda, std::string_view sector);

/// Stores energies and (real) eigenvectors under cache_dir/<key>.eig:
/// magic "OPFD", format version u32, dimension u64, then d little-endian
/// f64 energies and d^2 f64 vector entries column-major. Writes are atomic
/// (temp file + rename). Requires exactly real eigenvectors.
void cache_eigensystem(const std::filesystem::path& cache_dir, const std::string& key,
                       const spectra::EigenSystem& eig);

/// Loads a cached eigensystem; magic/version mismatch or a short file is a
/// miss (short files additionally warn on stderr).
std::optional<spectra::EigenSystem> load_eigensystem(const std::filesystem::path& cache_dir,
                                                     const std::string& key);

}  // namespace opfid::cache
