#pragma once
// Global minimization of the average time a geodesic spends in a region:
// g2^T, its large-T trend, grazing-ray detection, and the alpha^T bracket.

#include <cstdint>
#include <string>
#include <vector>

#include "obswave/geometry.hpp"

namespace obswave {

struct SearchOptions {
  // phase-space grids
  int circleStarts = 512;  // x 2 directions
  int torusGrid1 = 64, torusGrid2 = 64, torusAngles = 256;
  int sphereTheta = 32, spherePhi = 64, sphereDirs = 64;
  // torus angles with rational slope p/q, q <= this, are always seeded
  int maxRationalDenominator = 16;
  // derivative-free refinement (coordinate-shrinking simplex)
  int refineIters = 200;
  int refineSeeds = 16;
  // documented search slack for the soft superadditivity check, per unit time
  double superadditivitySlack = 1e-3;
  uint64_t seed = 0x6f62737761766531ull;
  int threads = 0;  // 0 = hardware concurrency

  bool operator==(const SearchOptions&) const = default;
};

/// Best (smallest) found average (1/T) int_0^T chi_omega(gamma(t)) dt.
/// The reported value is an UPPER bound on g2^T: the search can miss the
/// infimum but never undershoots it.
struct G2Result {
  double T = 0;
  double value = 1;  // in [0,1]
  Ray argmin;
  bool stalled = false;  // refinement made no progress > 1e-12
  std::string provenance;  // grid resolution and refinement budget
};

G2Result g2(const Region& region, double T, const SearchOptions& opt = {});

struct G2LimitResult {
  std::vector<double> horizons;
  std::vector<G2Result> values;
  double extrapolated = 0;  // trend value at the largest horizon
  bool superadditivityOk = true;  // soft: T*g2^T superadditive up to slack
  bool monotoneAnomaly = false;   // flagged, not fatal
  std::string note;
};

/// g2^T along an increasing horizon schedule with a trend report.
G2LimitResult g2Limit(const Region& region, const std::vector<double>& schedule,
                      const SearchOptions& opt = {});

struct GrazingReport {
  struct Hit {
    Ray ray;
    double boundaryTime = 0;
  };
  std::vector<Hit> hits;     // rays with positive boundary time
  int candidatesTested = 0;  // boundary-aligned candidate rays
  int randomTested = 0;
  bool heuristicPass = false;
  std::string verdict;  // "HEURISTIC-PASS" or "FAIL-WITNESSED"
};

/// Looks for rays spending positive time on the region boundary: candidates
/// aligned with primitive edges / boundary circles, plus a random sample.
/// Never claims a proof; a clean scan is only heuristic evidence.
GrazingReport grazingScan(const Region& region, double T, int samples,
                          uint64_t seed = 0x6f62737761766531ull);

struct AlphaBracketResult {
  double lo = 0;  // g2^T(interior)/2, itself an upper-bound estimate
  double hi = 0;  // g2^T(closure)/2
  bool collapsed = false;  // no grazing found (heuristic), single value applies
  double alpha = 0;        // reported value when collapsed
  std::string note;
};

AlphaBracketResult alphaBracket(const Region& region, double T,
                                const SearchOptions& opt = {});

}  // namespace obswave
