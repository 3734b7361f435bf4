#pragma once
// Structured-text run configuration: INI-style grammar, named presets for the
// worked examples, and construction of the domain objects a run needs.

#include "obswave/raytrace.hpp"
#include "obswave/spectral.hpp"

namespace obswave {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line = 0, const std::string& field = "")
      : std::runtime_error(msg), line(line), field(field) {}
  int line;           // 1-based source line, 0 if not tied to one
  std::string field;  // offending section.key, empty if not tied to one
};

struct RunConfig {
  // [manifold]
  std::string manifoldKind = "circle";  // circle | torus | sphere
  double L1 = 1.0, L2 = 1.0;            // torus periods
  // [region]
  std::string topology = "interior";  // interior | closure
  // primitive lines, verbatim: "arc A LEN" | "rect X0 Y0 X1 Y1" |
  // "triangle X1 Y1 X2 Y2 X3 Y3" | "cap THETA0 AX AY AZ" |
  // "band THETA0 THETA1 AX AY AZ"
  std::vector<std::string> primitives;
  // [spectral]
  double lambdaMax = 8.0;
  int thetaOrder = 0, phiOrder = 0;  // 0 = module default
  // [time]
  std::vector<double> horizons{25.0, 50.0, 100.0};
  // [search]
  SearchOptions search;
  // [output]
  std::string outputDir = ".";
  std::string formats = "csv,text";

  bool operator==(const RunConfig&) const = default;
};

/// Parse the documented INI-style grammar (UTF-8). Unknown sections or keys,
/// malformed values, and malformed primitives raise ConfigError with the line
/// and section.key. parse(serialize(parse(text))) == parse(text).
RunConfig parseConfig(const std::string& text);

/// Canonical serialization; every documented field is emitted.
std::string serializeConfig(const RunConfig& config);

/// Named presets: "circle-halfarc", "sphere-hemisphere", "torus-triangles".
RunConfig presetConfig(const std::string& name);

ManifoldSpec configManifold(const RunConfig& config);
Region configRegion(const RunConfig& config);

}  // namespace obswave
