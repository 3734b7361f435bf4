#include "obswave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace obswave {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void gaussLegendre01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

}  // namespace

std::string ObservabilityReport::toCsv() const {
  std::ostringstream os;
  os << "T,name,value,bound_side,tolerance\n";
  for (const auto& r : rows)
    os << fmt(r.T) << ',' << r.name << ',' << fmt(r.value) << ',' << r.boundSide << ','
       << fmt(r.tolerance) << '\n';
  return os.str();
}

std::string ObservabilityReport::toText() const {
  std::ostringstream os;
  os << "observability sweep: " << manifoldName << ", frequency cutoff " << fmt(lambdaMax)
     << ", band [1," << bandModes << "], seed " << seed << "\n";
  os << "horizons:";
  for (double T : horizons) os << ' ' << fmt(T);
  os << "\n\nquantities (bound_side marks one-sided semantics):\n";
  for (const auto& r : rows) {
    os << "  T=" << fmt(r.T) << "  " << r.name << " = " << fmt(r.value) << "  ["
       << r.boundSide << ", tol " << fmt(r.tolerance) << "]\n";
  }
  os << "\nverdicts:\n";
  for (const auto& v : verdicts) {
    os << "  " << v.name << ": " << (v.pass ? "PASS" : "FAIL") << "  checked: " << v.invariant
       << "  measured slack: " << fmt(v.slack) << "\n";
  }
  os << "grazing scan: " << grazingVerdict << " (heuristic; not a proof)\n";
  return os.str();
}

ObservabilityReport sweep(const Region& region, double lambdaMax,
                          const std::vector<double>& horizons, const SearchOptions& search,
                          const MassProvider& massProvider) {
  if (horizons.size() < 3 || !std::is_sorted(horizons.begin(), horizons.end()))
    throw AnalysisError("sweep needs an increasing horizon grid with at least 3 points");
  auto basis = SpectralBasis::build(region.manifold(), lambdaMax);
  if (basis.eigenspaces().size() < 2)
    throw AnalysisError("frequency cutoff admits fewer than two eigenspaces");

  ObservabilityReport rep;
  rep.manifoldName = region.manifold().name();
  rep.lambdaMax = lambdaMax;
  rep.horizons = horizons;
  rep.seed = search.seed;
  rep.bandModes = basis.size();

  auto mass = massProvider ? massProvider(basis, region, 0, basis.size())
                           : massMatrix(basis, region, 0, basis.size());
  bool analytic = mass.provenance == "analytic";
  double massTol = analytic ? 1e-10 : 1e-6;
  double g1v = g1(basis, mass);
  auto gap = gapCheck(basis);
  rep.rows.push_back({0, "g1_cutoff", g1v, "exact", massTol});
  rep.rows.push_back({0, "gamma_min", gap.gammaMin, "exact", 0});

  std::vector<double> cOverT, g2int, g2clo;
  for (double T : horizons) {
    auto band = bandConstant(basis, mass, T);
    auto gi = g2(region.withTopology(Topology::Interior), T, search);
    auto gc = g2(region.withTopology(Topology::Closure), T, search);
    cOverT.push_back(band.perTime);
    g2int.push_back(gi.value);
    g2clo.push_back(gc.value);
    rep.rows.push_back({T, "C_band_over_T", band.perTime, "upper", 1e-10});
    rep.rows.push_back({T, "g2_interior", gi.value, "upper", 1e-12});
    rep.rows.push_back({T, "g2_closure", gc.value, "upper", 1e-12});
    rep.rows.push_back({T, "alpha_lo", 0.5 * gi.value, "bracket", 1e-12});
    rep.rows.push_back({T, "alpha_hi", 0.5 * gc.value, "bracket", 1e-12});
  }
  auto scan = grazingScan(region.withTopology(Topology::Closure), horizons.back(), 256,
                          search.seed);
  rep.grazingVerdict = scan.verdict;

  // Theorem main_finite_time (truncated): C/T <= g1/2 + 1e-10 at every T
  double worst = -1e300;
  for (double c : cOverT) worst = std::max(worst, c - 0.5 * g1v);
  rep.verdicts.push_back({"main_finite_time", worst <= 1e-10,
                          "C_band/T <= g1_cutoff/2 + 1e-10 at every horizon", worst});

  // Theorem computation: bracket ordering alpha_lo <= alpha_hi per horizon
  double bworst = -1e300;
  for (size_t i = 0; i < horizons.size(); ++i)
    bworst = std::max(bworst, 0.5 * (g2int[i] - g2clo[i]));
  rep.verdicts.push_back({"computation_bracket", bworst <= 1e-12,
                          "g2 interior/2 <= g2 closure/2 per horizon (search estimates)",
                          bworst});

  // Corollary obser_carac_explicit(i) witness: positive g2 forces positive C
  bool posOk = true;
  double posSlack = 1e300;
  for (size_t i = 0; i < horizons.size(); ++i) {
    if (g2int[i] > 0.05) {
      posOk = posOk && horizons[i] * cOverT[i] > 1e-8;
      posSlack = std::min(posSlack, horizons[i] * cOverT[i]);
    }
  }
  rep.verdicts.push_back({"observability_positivity", posOk,
                          "g2 interior > 0.05 implies C_band > 1e-8 (witness only)",
                          posSlack == 1e300 ? 0 : posSlack});

  // Theorem main_long_time / Corollary cormain trend toward the predicted
  // limit (one-sided: the band constant dominates the true constant)
  double predicted = 0.5 * std::min(g1v, g2clo.back());
  double d0 = std::abs(cOverT.front() - predicted);
  double d1 = std::abs(cOverT.back() - predicted);
  bool trendOk = d1 <= d0 + 1e-9;
  rep.verdicts.push_back({"long_time_trend", trendOk,
                          "|C_band/T - min(g1,g2_closure)/2| nonincreasing over the grid",
                          d1 - d0});

  // Theorem spectral_gap1 trend, only meaningful when the gap is witnessed
  if (gap.verdict == "WITNESSED") {
    bool dec = true;
    double gworst = -1e300;
    for (size_t i = 1; i < horizons.size(); ++i) {
      double prev = std::abs(cOverT[i - 1] - 0.5 * g1v);
      double cur = std::abs(cOverT[i] - 0.5 * g1v);
      gworst = std::max(gworst, cur - prev);
      dec = dec && cur <= prev + 1e-9;
    }
    rep.verdicts.push_back({"spectral_gap_trend", dec,
                            "|C_band/T - g1/2| nonincreasing along the horizon grid",
                            gworst});
  }
  return rep;
}

ClosedFormResult torusClosedForm(const Region& region, int jMax) {
  if (region.manifold().kind != ManifoldKind::Circle)
    throw AnalysisError("closed form applies to circle arc regions only");
  if (jMax < 1) throw AnalysisError("closed form needs jMax >= 1");
  double sup = 0;
  for (int j = 1; j <= jMax; ++j) {
    double S = 0, C = 0;
    for (const auto& prim : region.primitives()) {
      const auto& arc = std::get<CircleArc>(prim);
      double a = arc.a, b = arc.a + arc.len, f = 2.0 * j;
      S += (std::cos(f * a) - std::cos(f * b)) / f;
      C += (std::sin(f * b) - std::sin(f * a)) / f;
    }
    sup = std::max(sup, std::hypot(S, C));
  }
  ClosedFormResult out;
  double half = region.measure() / 2.0;
  out.g1ClosedForm = (half - 0.5 * sup) / kPi;
  out.predictedLimit = 0.5 * out.g1ClosedForm;
  out.limitAsPrinted = (half - sup) / kPi;
  return out;
}

MVResult mvCheck(double delta, int n, uint64_t seed) {
  if (delta <= 0 || n < 2) throw AnalysisError("mv check needs delta > 0 and n >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> lambda(n);
  std::vector<std::complex<double>> a(n), b(n);
  lambda[0] = 10.0 * u01(rng);
  for (int j = 1; j < n; ++j) lambda[j] = lambda[j - 1] + delta * (1.0 + u01(rng));
  double na = 0, nb = 0;
  for (int j = 0; j < n; ++j) {
    a[j] = {gauss(rng), gauss(rng)};
    b[j] = {gauss(rng), gauss(rng)};
    na += std::norm(a[j]);
    nb += std::norm(b[j]);
  }
  std::complex<double> s = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      s += a[j] * std::conj(b[k]) / (lambda[j] - lambda[k]);
    }
  MVResult out;
  out.ratio = std::norm(s) / (kPi * kPi / (delta * delta) * na * nb);
  out.holds = out.ratio <= 1.0;
  return out;
}

std::complex<double> CoherentState::eval(double x) const {
  double dx = x - x0;
  double amp = std::pow(k / kPi, 0.25) * std::exp(-0.5 * k * dx * dx);
  double phase = k * dx * xi0;
  return {amp * std::cos(phase), amp * std::sin(phase)};
}

double CoherentState::density(double x) const {
  double dx = x - x0;
  return std::sqrt(k / kPi) * std::exp(-k * dx * dx);
}

CoherentCheckResult coherentCheck(const std::function<double(double)>& symbol, double x0,
                                  double xi0, const std::vector<double>& kSchedule) {
  CoherentCheckResult out;
  double target = symbol(x0);
  std::vector<double> gx, gw;
  gaussLegendre01(400, gx, gw);
  for (double k : kSchedule) {
    CoherentState u{x0, xi0, k};
    double w = 8.0 / std::sqrt(k);
    int widen = 0;
    while (std::erfc(std::sqrt(k) * w) > 1e-12) {
      w *= 2.0;
      if (++widen > 3)
        throw AnalysisError("coherent-state quadrature domain failed to capture the tail");
    }
    double v = 0;
    for (size_t i = 0; i < gx.size(); ++i) {
      double x = x0 + w * gx[i];
      v += w * gw[i] * symbol(x) * u.density(x);
    }
    out.table.push_back({k, v, std::abs(v - target)});
  }
  bool dec = true;
  double rate = 0;
  for (size_t i = 0; i < out.table.size(); ++i) {
    if (i > 0) dec = dec && out.table[i].error <= out.table[i - 1].error + 1e-15;
    rate = std::max(rate, out.table[i].error * std::sqrt(out.table[i].k));
  }
  out.pass = dec;
  out.fittedRate = rate;
  return out;
}

GapCheckResult gapCheck(const SpectralBasis& basis) {
  GapCheckResult out;
  out.gammaMin = basis.minGap();
  out.note = "truncation can witness the uniform gap, not certify it for the full spectrum";
  // compare against the half-cutoff basis: genuinely gapped spectra keep
  // roughly the same minimal gap, lattice spectra shrink
  double ref = out.gammaMin;
  try {
    auto half = SpectralBasis::build(basis.manifold(), basis.lambdaMax() / 2.0);
    if (half.eigenspaces().size() >= 2) ref = half.minGap();
  } catch (const SpectralError&) {
    // half cutoff below the first frequency; nothing to compare against
  }
  bool shrinking = out.gammaMin < 0.8 * ref - 1e-12;
  out.verdict = shrinking ? "FAIL-WITNESSED" : "WITNESSED";
  return out;
}

}  // namespace obswave
