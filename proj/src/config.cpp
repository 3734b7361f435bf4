#include "obswave/config.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace obswave {
namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parseDoubles(const std::string& s, int line, const std::string& field,
                                 int expect = -1) {
  std::istringstream is(s);
  std::vector<double> out;
  double v;
  while (is >> v) out.push_back(v);
  std::string rest;
  if (is.clear(), is >> rest)
    throw ConfigError("malformed number '" + rest + "'", line, field);
  if (expect >= 0 && (int)out.size() != expect)
    throw ConfigError("expected " + std::to_string(expect) + " numbers", line, field);
  return out;
}

double parseDouble(const std::string& s, int line, const std::string& field) {
  return parseDoubles(s, line, field, 1)[0];
}

int parseInt(const std::string& s, int line, const std::string& field) {
  double v = parseDouble(s, line, field);
  if (v != std::floor(v)) throw ConfigError("expected an integer", line, field);
  return (int)v;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void validatePrimitiveLine(const std::string& value, int line, const std::string& field) {
  std::istringstream is(value);
  std::string kind;
  is >> kind;
  int args = kind == "arc"        ? 2
             : kind == "rect"     ? 4
             : kind == "triangle" ? 6
             : kind == "cap"      ? 4
             : kind == "band"     ? 5
                                  : -1;
  if (args < 0) throw ConfigError("unknown primitive kind '" + kind + "'", line, field);
  std::string rest;
  std::getline(is, rest);
  parseDoubles(rest, line, field, args);
}

}  // namespace

RunConfig parseConfig(const std::string& text) {
  RunConfig c;
  c.primitives.clear();
  c.horizons.clear();
  std::istringstream is(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line, "");
      section = s.substr(1, s.size() - 2);
      if (section != "manifold" && section != "region" && section != "spectral" &&
          section != "time" && section != "search" && section != "output")
        throw ConfigError("unknown section '" + section + "'", line, section);
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line, section);
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    std::string field = section + "." + key;
    if (section.empty()) throw ConfigError("key outside any section", line, key);

    if (section == "manifold") {
      if (key == "kind") {
        if (value != "circle" && value != "torus" && value != "sphere")
          throw ConfigError("manifold kind must be circle, torus or sphere", line, field);
        c.manifoldKind = value;
      } else if (key == "L1") {
        c.L1 = parseDouble(value, line, field);
      } else if (key == "L2") {
        c.L2 = parseDouble(value, line, field);
      } else {
        throw ConfigError("unknown key", line, field);
      }
    } else if (section == "region") {
      if (key == "topology") {
        if (value != "interior" && value != "closure")
          throw ConfigError("topology must be interior or closure", line, field);
        c.topology = value;
      } else if (key == "primitive") {
        validatePrimitiveLine(value, line, field);
        c.primitives.push_back(value);
      } else {
        throw ConfigError("unknown key", line, field);
      }
    } else if (section == "spectral") {
      if (key == "lambda_max") c.lambdaMax = parseDouble(value, line, field);
      else if (key == "theta_order") c.thetaOrder = parseInt(value, line, field);
      else if (key == "phi_order") c.phiOrder = parseInt(value, line, field);
      else throw ConfigError("unknown key", line, field);
    } else if (section == "time") {
      if (key == "horizons") c.horizons = parseDoubles(value, line, field);
      else throw ConfigError("unknown key", line, field);
    } else if (section == "search") {
      auto& o = c.search;
      if (key == "circle_starts") o.circleStarts = parseInt(value, line, field);
      else if (key == "torus_grid") {
        auto v = parseDoubles(value, line, field, 3);
        o.torusGrid1 = (int)v[0];
        o.torusGrid2 = (int)v[1];
        o.torusAngles = (int)v[2];
      } else if (key == "sphere_grid") {
        auto v = parseDoubles(value, line, field, 3);
        o.sphereTheta = (int)v[0];
        o.spherePhi = (int)v[1];
        o.sphereDirs = (int)v[2];
      } else if (key == "rational_denominator") {
        o.maxRationalDenominator = parseInt(value, line, field);
      } else if (key == "refine_iters") o.refineIters = parseInt(value, line, field);
      else if (key == "refine_seeds") o.refineSeeds = parseInt(value, line, field);
      else if (key == "superadditivity_slack") {
        o.superadditivitySlack = parseDouble(value, line, field);
      } else if (key == "seed") {
        try {
          o.seed = std::stoull(value);
        } catch (const std::exception&) {
          throw ConfigError("expected an unsigned integer", line, field);
        }
      } else if (key == "threads") o.threads = parseInt(value, line, field);
      else throw ConfigError("unknown key", line, field);
    } else {  // output
      if (key == "dir") c.outputDir = value;
      else if (key == "formats") c.formats = value;
      else throw ConfigError("unknown key", line, field);
    }
  }
  if (c.horizons.empty()) c.horizons = {25.0, 50.0, 100.0};
  if (c.primitives.empty())
    throw ConfigError("region has no primitives", 0, "region.primitive");
  return c;
}

std::string serializeConfig(const RunConfig& c) {
  std::ostringstream os;
  os << "[manifold]\n";
  os << "kind = " << c.manifoldKind << "\n";
  os << "L1 = " << num(c.L1) << "\n";
  os << "L2 = " << num(c.L2) << "\n\n";
  os << "[region]\n";
  os << "topology = " << c.topology << "\n";
  for (const auto& p : c.primitives) os << "primitive = " << p << "\n";
  os << "\n[spectral]\n";
  os << "lambda_max = " << num(c.lambdaMax) << "\n";
  os << "theta_order = " << c.thetaOrder << "\n";
  os << "phi_order = " << c.phiOrder << "\n\n";
  os << "[time]\n";
  os << "horizons =";
  for (double T : c.horizons) os << ' ' << num(T);
  os << "\n\n[search]\n";
  const auto& o = c.search;
  os << "circle_starts = " << o.circleStarts << "\n";
  os << "torus_grid = " << o.torusGrid1 << ' ' << o.torusGrid2 << ' ' << o.torusAngles << "\n";
  os << "sphere_grid = " << o.sphereTheta << ' ' << o.spherePhi << ' ' << o.sphereDirs << "\n";
  os << "rational_denominator = " << o.maxRationalDenominator << "\n";
  os << "refine_iters = " << o.refineIters << "\n";
  os << "refine_seeds = " << o.refineSeeds << "\n";
  os << "superadditivity_slack = " << num(o.superadditivitySlack) << "\n";
  os << "seed = " << o.seed << "\n";
  os << "threads = " << o.threads << "\n\n";
  os << "[output]\n";
  os << "dir = " << c.outputDir << "\n";
  os << "formats = " << c.formats << "\n";
  return os.str();
}

RunConfig presetConfig(const std::string& name) {
  RunConfig c;
  if (name == "circle-halfarc") {
    c.manifoldKind = "circle";
    c.primitives = {"arc 0 " + num(kPi)};
    c.lambdaMax = 8.0;
    c.horizons = {25.0, 50.0, 100.0};
  } else if (name == "sphere-hemisphere") {
    c.manifoldKind = "sphere";
    c.primitives = {"cap " + num(kPi / 2) + " 0 0 1"};
    c.lambdaMax = 8.5;  // covers the first eight harmonic degrees
    c.horizons = {kPi, kTwoPi, 2 * kTwoPi};
  } else if (name == "torus-triangles") {
    c.manifoldKind = "torus";
    c.primitives = {
        "triangle 0 0 0.5 0 0 0.5",
        "triangle 1 0 1 0.5 0.5 0",
        "triangle 0 1 0 0.5 0.5 1",
        "triangle 1 1 0.5 1 1 0.5",
    };
    c.lambdaMax = 6.0 * kPi;
    c.horizons = {25.0, 50.0, 100.0};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

ManifoldSpec configManifold(const RunConfig& c) {
  if (c.manifoldKind == "circle") return ManifoldSpec::circle();
  if (c.manifoldKind == "torus") return ManifoldSpec::flatTorus(c.L1, c.L2);
  return ManifoldSpec::sphere();
}

Region configRegion(const RunConfig& c) {
  auto m = configManifold(c);
  std::vector<Primitive> prims;
  for (const auto& line : c.primitives) {
    std::istringstream is(line);
    std::string kind;
    is >> kind;
    std::vector<double> v;
    double x;
    while (is >> x) v.push_back(x);
    if (kind == "arc") {
      prims.push_back(CircleArc{v[0], v[1]});
    } else if (kind == "rect") {
      prims.push_back(TorusRect{v[0], v[1], v[2], v[3]});
    } else if (kind == "triangle") {
      prims.push_back(TorusTriangle{{{{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}}}});
    } else if (kind == "cap") {
      prims.push_back(SphereCap{v[0], {v[1], v[2], v[3]}});
    } else {
      prims.push_back(SphereBand{v[0], v[1], {v[2], v[3], v[4]}});
    }
  }
  auto topo = c.topology == "closure" ? Topology::Closure : Topology::Interior;
  try {
    return Region(m, prims, topo);
  } catch (const RegionError& e) {
    throw ConfigError(std::string("invalid region: ") + e.what(), 0, "region.primitive");
  }
}

}  // namespace obswave
