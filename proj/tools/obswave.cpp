// Command-line front end: config parsing, basis listing, observability
// reports, and validation suites.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "obswave/analysis.hpp"
#include "obswave/cache.hpp"
#include "obswave/config.hpp"

namespace {

using namespace obswave;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

RunConfig loadConfig(const std::string& configPath, const std::string& preset) {
  if (!preset.empty() && !configPath.empty())
    throw ConfigError("give either --config or --preset, not both");
  if (!preset.empty()) return presetConfig(preset);
  if (configPath.empty()) throw ConfigError("one of --config or --preset is required");
  std::ifstream in(configPath);
  if (!in) throw ConfigError("cannot read config file '" + configPath + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseConfig(ss.str());
}

int cmdBasis(const RunConfig& config) {
  auto basis = SpectralBasis::build(configManifold(config), config.lambdaMax);
  std::cout << "index,lambda,descriptor,eigenspace\n";
  for (const auto& mode : basis.modes()) {
    int spaceId = 0;
    for (size_t s = 0; s < basis.eigenspaces().size(); ++s) {
      if (mode.index - 1 >= basis.eigenspaces()[s].first &&
          mode.index - 1 < basis.eigenspaces()[s].last) {
        spaceId = (int)s + 1;
        break;
      }
    }
    std::cout << mode.index << ',' << fmt(mode.lambda) << ',' << describeMode(mode) << ','
              << spaceId << '\n';
  }
  return 0;
}

int cmdReport(const RunConfig& config) {
  auto region = configRegion(config);
  MassProvider cached = [](const SpectralBasis& b, const Region& r, int first, int last) {
    return cachedMassMatrix(b, r, first, last, {}, &std::cerr);
  };
  auto report = sweep(region, config.lambdaMax, config.horizons, config.search, cached);
  std::filesystem::path dir = config.outputDir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  bool wantCsv = config.formats.find("csv") != std::string::npos;
  bool wantText = config.formats.find("text") != std::string::npos;
  if (wantCsv) {
    std::ofstream out(dir / "report.csv", std::ios::binary);
    out << report.toCsv();
  }
  if (wantText) {
    std::ofstream out(dir / "report.txt", std::ios::binary);
    out << report.toText();
  }
  std::cout << report.toText();
  return 0;
}

bool suiteMv(uint64_t seed) {
  bool pass = true;
  for (double delta : {0.5, 1.0, 2.0}) {
    double maxRatio = 0;
    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
      auto r = mvCheck(delta, 200, seed + i);
      maxRatio = std::max(maxRatio, r.ratio);
      if (!r.holds) ++violations;
    }
    pass = pass && violations == 0;
    std::cout << "suite=mv delta=" << fmt(delta) << " instances=1000 violations="
              << violations << " max_ratio=" << fmt(maxRatio) << " status="
              << (violations == 0 ? "pass" : "fail") << "\n";
  }
  return pass;
}

bool suiteCoherent() {
  auto res = coherentCheck([](double x) { return std::cos(x); }, 0.0, 0.0,
                           {10.0, 100.0, 1000.0});
  bool pass = res.pass;
  for (const auto& row : res.table)
    std::cout << "suite=coherent k=" << fmt(row.k) << " value=" << fmt(row.value)
              << " error=" << fmt(row.error) << "\n";
  std::cout << "suite=coherent fitted_rate=" << fmt(res.fittedRate)
            << " status=" << (pass ? "pass" : "fail") << "\n";
  return pass;
}

bool suiteInvariants() {
  bool pass = true;
  for (const char* name : {"circle-halfarc", "sphere-hemisphere", "torus-triangles"}) {
    auto config = presetConfig(name);
    auto region = configRegion(config);
    auto basis = SpectralBasis::build(region.manifold(), config.lambdaMax);
    auto mass = cachedMassMatrix(basis, region, 0, basis.size(), {}, &std::cerr);
    auto grid = defaultBandGrid(basis);
    double worstMono = -1e300, worstRange = -1e300, worstHighPass = -1e300,
           worstFinite = -1e300;
    for (double T : config.horizons) {
      double prev = 1e300;
      for (int N : grid) {
        MassMatrix sub{0, N, mass.m.topLeftCorner(N, N), mass.provenance};
        double c = bandConstant(basis, sub, T).value;
        worstMono = std::max(worstMono, c - prev);            // nonincreasing in N
        worstRange = std::max({worstRange, -c, c - T});       // within [0, T]
        double g = g1(basis, sub);
        worstFinite = std::max(worstFinite, c / T - 0.5 * g);
        prev = c;
      }
      // high-pass bands (N, M], M = full basis: nondecreasing in N
      prev = -1e300;
      for (int N : grid) {
        if (N == basis.size()) break;
        MassMatrix sub{N, basis.size(),
                       mass.m.bottomRightCorner(basis.size() - N, basis.size() - N),
                       mass.provenance};
        double c = bandConstant(basis, sub, T).value;
        worstHighPass = std::max(worstHighPass, prev - c);
        prev = c;
      }
    }
    bool ok = worstMono <= 1e-9 && worstRange <= 1e-9 && worstHighPass <= 1e-9 &&
              worstFinite <= 1e-10;
    pass = pass && ok;
    std::cout << "suite=invariants preset=" << name << " band_monotone_slack="
              << fmt(worstMono) << " range_slack=" << fmt(worstRange)
              << " highpass_slack=" << fmt(worstHighPass) << " finite_time_slack="
              << fmt(worstFinite) << " status=" << (ok ? "pass" : "fail") << "\n";
  }
  return pass;
}

int cmdValidate(const std::string& suite, uint64_t seed) {
  bool pass = true;
  if (suite == "mv" || suite == "all") pass = suiteMv(seed) && pass;
  if (suite == "coherent" || suite == "all") pass = suiteCoherent() && pass;
  if (suite == "invariants" || suite == "all") pass = suiteInvariants() && pass;
  std::cout << "overall=" << (pass ? "pass" : "fail") << "\n";
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"band-limited observability constants on model closed manifolds"};
  app.require_subcommand(1);

  std::string configPath, preset;
  auto addInput = [&](CLI::App* cmd) {
    cmd->add_option("--config", configPath, "path to an INI-style run configuration");
    cmd->add_option("--preset", preset,
                    "named preset: circle-halfarc, sphere-hemisphere, torus-triangles");
  };
  auto* basisCmd = app.add_subcommand("basis", "list the eigenbasis as CSV on stdout");
  addInput(basisCmd);
  auto* reportCmd =
      app.add_subcommand("report", "run the observability sweep, write report.csv/report.txt");
  addInput(reportCmd);
  std::string suite = "all";
  uint64_t seed = 42;
  auto* validateCmd = app.add_subcommand("validate", "run a validation suite");
  validateCmd->add_option("suite", suite, "mv | coherent | invariants | all");
  validateCmd->add_option("--seed", seed, "seed for randomized suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors are exit code 2
  }

  try {
    if (basisCmd->parsed()) return cmdBasis(loadConfig(configPath, preset));
    if (reportCmd->parsed()) return cmdReport(loadConfig(configPath, preset));
    if (suite != "mv" && suite != "coherent" && suite != "invariants" && suite != "all") {
      std::cerr << "error: unknown suite '" << suite << "'\n";
      return 2;
    }
    return cmdValidate(suite, seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error";
    if (e.line > 0) std::cerr << " (line " << e.line << ")";
    if (!e.field.empty()) std::cerr << " [" << e.field << "]";
    std::cerr << ": " << e.what() << "\n";
    return 2;
  } catch (const SpectralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
