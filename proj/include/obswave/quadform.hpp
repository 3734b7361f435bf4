#pragma once
// The Hermitian quadratic form behind the band-limited observability constant
// and its minimal eigenvalue, plus the spectral quantity g1.

#include <complex>

#include "obswave/spectral.hpp"

namespace obswave {

/// f_T(x) = (e^{iTx} - 1) / (iTx), continuously extended by f_T(0) = 1.
/// Satisfies |f_T(x)| <= min(1, 2/(T|x|)).
std::complex<double> ft(double x, double T);

class QuadFormError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Assemble the 2m x 2m Hermitian form H with value
///   v* H v = (1/T) \int_0^T \int_omega |y(t)|^2,  v = (p, q),
/// for waves y(t) = sum_j (p_j e^{i lambda_j t} + q_j e^{-i lambda_j t}) phi_j
/// over the mode range of the mass matrix.
Eigen::MatrixXcd assembleForm(const SpectralBasis& basis, const MassMatrix& mass, double T);

struct MinEig {
  double value = 0;
  Eigen::VectorXcd vector;  // unit eigenvector attaining it
};

/// Smallest eigenvalue of a Hermitian matrix. Verifies hermiticity on entry
/// and the eigen-residual on exit; throws QuadFormError on either failure.
MinEig minEigHermitian(const Eigen::MatrixXcd& H);

struct BandConstant {
  double value = 0;          // C_T over the mode band
  double perTime = 0;        // value / T
  Eigen::VectorXcd minimizer;  // (p, q) coefficients of the worst wave
};

/// Band-limited observability constant C_T over the modes of `mass`:
/// C = (T/2) * lambda_min(H).
BandConstant bandConstant(const SpectralBasis& basis, const MassMatrix& mass, double T);

/// g1 = min over eigenspaces covered by `mass` of the smallest eigenvalue of
/// the eigenspace's Gram block.
double g1(const SpectralBasis& basis, const MassMatrix& mass);

/// Default truncation grid: eigenspace-aligned mode counts near 1/4, 1/2,
/// 3/4 and all of the basis (deduplicated, ascending).
std::vector<int> defaultBandGrid(const SpectralBasis& basis);

}  // namespace obswave
