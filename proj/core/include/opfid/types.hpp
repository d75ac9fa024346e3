#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

namespace opfid {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Dense operator on a finite Hilbert space. Hermiticity is a contract,
/// not a storage property; check with is_hermitian / require_hermitian.
using HermitianMatrix = Eigen::MatrixXcd;

inline constexpr const char* kVersion = "1.0.0";

/// Dense O(d^3) diagonalization stays desk-feasible below this dimension.
inline constexpr int kDefaultDimGuard = 10000;

/// Largest |entry| (max norm).
double max_abs(const HermitianMatrix& m);
double max_abs(const RealMatrix& m);

/// True when max |A - A^dagger| <= rtol * max|A|.
bool is_hermitian(const HermitianMatrix& m, double rtol = 1e-12);

/// Throws std::invalid_argument naming `what` when is_hermitian fails.
void require_hermitian(const HermitianMatrix& m, double rtol, const std::string& what);

/// Short diagnostic identity for a matrix (dimension, norm, content hash).
/// Used in error messages so failures can be traced to a concrete input.
std::string matrix_fingerprint(const HermitianMatrix& m);

}  // namespace opfid
