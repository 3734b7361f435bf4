#pragma once
// Laplace-Beltrami eigenbases of the model manifolds and Gram (mass) matrices
// of eigenfunctions over a region.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "obswave/geometry.hpp"

namespace obswave {

struct CircleModeDesc {
  int j = 1;
  bool isCos = false;  // sin sorts before cos
  auto tie() const { return std::tuple(j, isCos); }
};

struct TorusModeDesc {
  int k1 = 0, k2 = 0;   // nonnegative wave numbers, (0,0) excluded
  int tag1 = 0, tag2 = 0;  // 0 = cos (constant factor when k == 0), 1 = sin
  auto tie() const { return std::tuple(k1, k2, tag1, tag2); }
};

struct SphereModeDesc {
  int l = 1;
  int m = 0;  // m >= 0: cos(m phi) harmonic; m < 0: sin(|m| phi) harmonic
  auto tie() const { return std::tuple(l, m); }
};

using ModeDesc = std::variant<CircleModeDesc, TorusModeDesc, SphereModeDesc>;

struct EigenMode {
  int index = 0;      // 1-based, Weyl-ordered
  double lambda = 0;  // sqrt of the Laplace eigenvalue
  ModeDesc desc;
};

std::string describeMode(const EigenMode& mode);

class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigenspace: contiguous slice [first, last) of the mode list sharing one
/// frequency. Truncations never split an eigenspace.
struct Eigenspace {
  int first = 0, last = 0;  // 0-based half-open mode range
  double lambda = 0;
  int size() const { return last - first; }
};

class SpectralBasis {
 public:
  static SpectralBasis build(const ManifoldSpec& manifold, double lambdaMax);

  const ManifoldSpec& manifold() const { return manifold_; }
  double lambdaMax() const { return lambdaMax_; }
  const std::vector<EigenMode>& modes() const { return modes_; }
  const std::vector<Eigenspace>& eigenspaces() const { return spaces_; }
  int size() const { return (int)modes_.size(); }

  /// Smallest difference between consecutive distinct frequencies.
  double minGap() const;

  /// Largest mode count N <= n such that [0, N) does not split an eigenspace.
  int alignDown(int n) const;

 private:
  ManifoldSpec manifold_;
  double lambdaMax_ = 0;
  std::vector<EigenMode> modes_;
  std::vector<Eigenspace> spaces_;
};

double evalMode(const ManifoldSpec& manifold, const EigenMode& mode, const Point& p);

// ---- mass matrices --------------------------------------------------------

struct QuadratureSpec {
  int thetaOrder = 0;  // 0 = auto (2*(lmax+2) Gauss nodes per smooth piece)
  int phiOrder = 0;    // 0 = auto (4*(lmax+1) uniform azimuth nodes)
};

class QuadratureError : public SpectralError {
 public:
  QuadratureError(const std::string& msg, double prev, double curr)
      : SpectralError(msg), previousEstimate(prev), currentEstimate(curr) {}
  double previousEstimate, currentEstimate;
};

/// Gram matrix M_jl = integral over omega of phi_j phi_l, for the 0-based
/// half-open mode range [first, last).
struct MassMatrix {
  int first = 0, last = 0;
  Eigen::MatrixXd m;
  std::string provenance;  // "analytic" or "quadrature(nTheta x nPhi)"
};

MassMatrix massMatrix(const SpectralBasis& basis, const Region& region, int first, int last,
                      const QuadratureSpec& quad = {});

/// Eigenspace-diagonal block of a mass matrix covering it.
Eigen::MatrixXd eigenspaceBlock(const MassMatrix& mass, const Eigenspace& space);

}  // namespace obswave
