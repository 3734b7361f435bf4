#include "obswave/raytrace.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <thread>

namespace obswave {
namespace {

struct Candidate {
  double value = 1;
  std::vector<double> params;
  int branch = 0;  // circle: direction index; unused elsewhere
};

bool candLess(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.branch != b.branch) return a.branch < b.branch;
  return a.params < b.params;
}

Ray makeRay(ManifoldKind kind, const std::vector<double>& p, int branch) {
  switch (kind) {
    case ManifoldKind::Circle:
      return Ray::onCircle(p[0], branch == 0 ? 1 : -1);
    case ManifoldKind::FlatTorus2:
      return Ray::onTorus(p[0], p[1], p[2]);
    case ManifoldKind::Sphere2:
      return Ray::onSphereAngles(p[0], p[1], p[2]);
  }
  return {};
}

// Nelder-Mead simplex minimization; deterministic, no restarts.
struct NMOutcome {
  std::vector<double> x;
  double f = 0;
  bool improved = false;
};

NMOutcome nelderMead(const std::function<double(const std::vector<double>&)>& fn,
                     const std::vector<double>& x0, const std::vector<double>& step,
                     int iters) {
  size_t n = x0.size();
  std::vector<std::pair<double, std::vector<double>>> simplex;
  simplex.reserve(n + 1);
  simplex.push_back({fn(x0), x0});
  for (size_t i = 0; i < n; ++i) {
    auto x = x0;
    x[i] += step[i];
    simplex.push_back({fn(x), x});
  }
  double f0 = std::min_element(simplex.begin(), simplex.end())->first;
  auto centroid = [&](size_t excl) {
    std::vector<double> c(n, 0.0);
    for (size_t i = 0; i < simplex.size(); ++i) {
      if (i == excl) continue;
      for (size_t k = 0; k < n; ++k) c[k] += simplex[i].second[k];
    }
    for (auto& v : c) v /= (double)n;
    return c;
  };
  auto blend = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> r(n);
    for (size_t k = 0; k < n; ++k) r[k] = a[k] + t * (b[k] - a[k]);
    return r;
  };
  for (int it = 0; it < iters; ++it) {
    std::sort(simplex.begin(), simplex.end());
    size_t worst = n;
    auto c = centroid(worst);
    auto xr = blend(c, simplex[worst].second, -1.0);
    double fr = fn(xr);
    if (fr < simplex[0].first) {
      auto xe = blend(c, simplex[worst].second, -2.0);
      double fe = fn(xe);
      simplex[worst] = fe < fr ? std::pair{fe, xe} : std::pair{fr, xr};
    } else if (fr < simplex[worst - 1].first) {
      simplex[worst] = {fr, xr};
    } else {
      auto xc = blend(c, simplex[worst].second, 0.5);
      double fc = fn(xc);
      if (fc < simplex[worst].first) {
        simplex[worst] = {fc, xc};
      } else {  // shrink toward the best vertex
        for (size_t i = 1; i <= n; ++i) {
          auto xs = blend(simplex[0].second, simplex[i].second, 0.5);
          simplex[i] = {fn(xs), xs};
        }
      }
    }
  }
  std::sort(simplex.begin(), simplex.end());
  return {simplex[0].second, simplex[0].first, simplex[0].first < f0 - 1e-12};
}

std::vector<double> torusAngleSet(const SearchOptions& opt) {
  std::vector<double> angles;
  angles.reserve(opt.torusAngles + 4 * opt.maxRationalDenominator * opt.maxRationalDenominator);
  for (int k = 0; k < opt.torusAngles; ++k) angles.push_back(kTwoPi * k / opt.torusAngles);
  for (int q = 1; q <= opt.maxRationalDenominator; ++q)
    for (int p = -opt.maxRationalDenominator; p <= opt.maxRationalDenominator; ++p) {
      if (std::gcd(std::abs(p), q) != 1) continue;
      angles.push_back(std::atan2((double)p, (double)q));   // slope p/q
      angles.push_back(std::atan2((double)q, (double)p));   // and its transpose
    }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
  return angles;
}

void keepBest(std::vector<Candidate>& pool, size_t cap, Candidate c) {
  pool.push_back(std::move(c));
  if (pool.size() > 4 * cap) {
    std::sort(pool.begin(), pool.end(), candLess);
    pool.resize(cap);
  }
}

}  // namespace

G2Result g2(const Region& region, double T, const SearchOptions& opt) {
  if (T <= 0) throw RegionError("g2 horizon must be positive");
  const auto& m = region.manifold();
  auto score = [&](const std::vector<double>& p, int branch) {
    return timeInRegion(makeRay(m.kind, p, branch), region, T) / T;
  };
  std::vector<Candidate> pool;
  char prov[160];
  if (m.kind == ManifoldKind::Circle) {
    for (int d = 0; d < 2; ++d)
      for (int i = 0; i < opt.circleStarts; ++i) {
        std::vector<double> p{kTwoPi * (i + 0.5) / opt.circleStarts};
        keepBest(pool, opt.refineSeeds, {score(p, d), p, d});
      }
    std::snprintf(prov, sizeof prov, "grid %dx2, refine %d iters x %d seeds",
                  opt.circleStarts, opt.refineIters, opt.refineSeeds);
  } else if (m.kind == ManifoldKind::FlatTorus2) {
    auto angles = torusAngleSet(opt);
    int nThreads = opt.threads > 0 ? opt.threads
                                   : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::vector<Candidate>> pools(nThreads);
    auto worker = [&](int tid) {
      auto& local = pools[tid];
      for (size_t a = tid; a < angles.size(); a += nThreads) {
        for (int i = 0; i < opt.torusGrid1; ++i)
          for (int j = 0; j < opt.torusGrid2; ++j) {
            std::vector<double> p{m.periods[0] * (i + 0.5) / opt.torusGrid1,
                                  m.periods[1] * (j + 0.5) / opt.torusGrid2, angles[a]};
            keepBest(local, opt.refineSeeds, {score(p, 0), p, 0});
          }
      }
    };
    std::vector<std::thread> threads;
    for (int t = 1; t < nThreads; ++t) threads.emplace_back(worker, t);
    worker(0);
    for (auto& t : threads) t.join();
    for (auto& local : pools)
      for (auto& c : local) pool.push_back(std::move(c));
    std::snprintf(prov, sizeof prov,
                  "grid %dx%dx%zu (rational slopes to 1/%d seeded), refine %d iters x %d seeds",
                  opt.torusGrid1, opt.torusGrid2, angles.size(), opt.maxRationalDenominator,
                  opt.refineIters, opt.refineSeeds);
  } else {
    std::vector<double> thetas;
    for (int i = 0; i < opt.sphereTheta; ++i) thetas.push_back(kPi * (i + 0.5) / opt.sphereTheta);
    thetas.push_back(kPi / 2);  // equators exactly
    for (double th : thetas)
      for (int j = 0; j < opt.spherePhi; ++j)
        for (int k = 0; k < opt.sphereDirs; ++k) {
          std::vector<double> p{th, kTwoPi * j / opt.spherePhi, kTwoPi * k / opt.sphereDirs};
          keepBest(pool, opt.refineSeeds, {score(p, 0), p, 0});
        }
    std::snprintf(prov, sizeof prov, "grid %dx%dx%d (equator row added), refine %d iters x %d seeds",
                  opt.sphereTheta, opt.spherePhi, opt.sphereDirs, opt.refineIters,
                  opt.refineSeeds);
  }
  std::sort(pool.begin(), pool.end(), candLess);
  if (pool.size() > (size_t)opt.refineSeeds) pool.resize(opt.refineSeeds);

  Candidate best = pool.front();
  bool anyImproved = false;
  std::vector<double> step;
  if (m.kind == ManifoldKind::Circle) {
    step = {kTwoPi / (2.0 * opt.circleStarts)};
  } else if (m.kind == ManifoldKind::FlatTorus2) {
    step = {m.periods[0] / (2.0 * opt.torusGrid1), m.periods[1] / (2.0 * opt.torusGrid2),
            kPi / opt.torusAngles};
  } else {
    step = {kPi / (2.0 * opt.sphereTheta), kPi / opt.spherePhi, kPi / opt.sphereDirs};
  }
  for (const auto& cand : pool) {
    int branch = cand.branch;
    auto res = nelderMead([&](const std::vector<double>& p) { return score(p, branch); },
                          cand.params, step, opt.refineIters);
    anyImproved = anyImproved || res.improved;
    Candidate refined{res.f, res.x, branch};
    if (candLess(refined, best)) best = refined;
  }
  G2Result out;
  out.T = T;
  out.value = best.value;
  out.argmin = makeRay(m.kind, best.params, best.branch);
  out.stalled = !anyImproved;
  out.provenance = prov;
  return out;
}

G2LimitResult g2Limit(const Region& region, const std::vector<double>& schedule,
                      const SearchOptions& opt) {
  if (schedule.empty() || !std::is_sorted(schedule.begin(), schedule.end()))
    throw RegionError("g2 limit needs an increasing horizon schedule");
  G2LimitResult out;
  out.horizons = schedule;
  for (double T : schedule) out.values.push_back(g2(region, T, opt));
  out.extrapolated = out.values.back().value;
  // soft superadditivity of T*g2^T for schedule pairs whose sum is scheduled
  for (size_t i = 0; i < schedule.size(); ++i)
    for (size_t j = i; j < schedule.size(); ++j) {
      double sum = schedule[i] + schedule[j];
      for (size_t k = 0; k < schedule.size(); ++k) {
        if (std::abs(schedule[k] - sum) > 1e-9) continue;
        double lhs = sum * out.values[k].value + opt.superadditivitySlack * sum;
        double rhs = schedule[i] * out.values[i].value + schedule[j] * out.values[j].value;
        if (lhs < rhs) out.superadditivityOk = false;
      }
    }
  // anomaly flag: more than one direction reversal beyond tolerance
  int reversals = 0;
  double lastDiff = 0;
  for (size_t i = 1; i < out.values.size(); ++i) {
    double d = out.values[i].value - out.values[i - 1].value;
    if (std::abs(d) < 1e-3) continue;
    if (lastDiff != 0 && std::signbit(d) != std::signbit(lastDiff)) ++reversals;
    lastDiff = d;
  }
  out.monotoneAnomaly = reversals >= 2;
  out.note = "all values are upper bounds on g2^T; the trend value is the largest-horizon result";
  return out;
}

GrazingReport grazingScan(const Region& region, double T, int samples, uint64_t seed) {
  const auto& m = region.manifold();
  GrazingReport rep;
  auto test = [&](const Ray& ray) {
    auto d = dwellTime(ray, region, T);
    ++rep.candidatesTested;
    if (d.grazing()) rep.hits.push_back({ray, d.boundary});
  };
  for (const auto& prim : region.primitives()) {
    if (const auto* arc = std::get_if<CircleArc>(&prim)) {
      test(Ray::onCircle(arc->a, 1));
      test(Ray::onCircle(arc->a + arc->len, -1));
    } else if (const auto* r = std::get_if<TorusRect>(&prim)) {
      test(Ray::onTorusDir(0.5 * (r->x0 + r->x1), r->y0, 1, 0));
      test(Ray::onTorusDir(0.5 * (r->x0 + r->x1), r->y1, 1, 0));
      test(Ray::onTorusDir(r->x0, 0.5 * (r->y0 + r->y1), 0, 1));
      test(Ray::onTorusDir(r->x1, 0.5 * (r->y0 + r->y1), 0, 1));
    } else if (const auto* tri = std::get_if<TorusTriangle>(&prim)) {
      for (int e = 0; e < 3; ++e) {
        auto a = tri->v[e], b = tri->v[(e + 1) % 3];
        double dx = b[0] - a[0], dy = b[1] - a[1];
        test(Ray::onTorusDir(0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), dx, dy));
      }
    } else {
      std::array<double, 3> axis{};
      std::vector<double> thetas;
      if (const auto* cap = std::get_if<SphereCap>(&prim)) {
        axis = cap->axis;
        thetas = {cap->theta0};
      } else {
        const auto& band = std::get<SphereBand>(prim);
        axis = band.axis;
        thetas = {band.theta0, band.theta1};
      }
      // a ray can only ride a boundary circle if that circle is a great circle
      for (double th : thetas) {
        if (std::abs(th - kPi / 2) > 1e-9) continue;
        Point n{axis[0], axis[1], axis[2]};
        Point ref = std::abs(n[2]) < 0.9 ? Point{0, 0, 1} : Point{1, 0, 0};
        Point o{n[1] * ref[2] - n[2] * ref[1], n[2] * ref[0] - n[0] * ref[2],
                n[0] * ref[1] - n[1] * ref[0]};
        double no = std::sqrt(o[0] * o[0] + o[1] * o[1] + o[2] * o[2]);
        for (auto& c : o) c /= no;
        Point d{n[1] * o[2] - n[2] * o[1], n[2] * o[0] - n[0] * o[2],
                n[0] * o[1] - n[1] * o[0]};
        test(Ray::onSphere(o, d));
      }
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    Ray ray;
    if (m.kind == ManifoldKind::Circle) {
      ray = Ray::onCircle(kTwoPi * u01(rng), u01(rng) < 0.5 ? 1 : -1);
    } else if (m.kind == ManifoldKind::FlatTorus2) {
      ray = Ray::onTorus(m.periods[0] * u01(rng), m.periods[1] * u01(rng), kTwoPi * u01(rng));
    } else {
      ray = Ray::onSphereAngles(std::acos(2.0 * u01(rng) - 1.0), kTwoPi * u01(rng),
                                kTwoPi * u01(rng));
    }
    ++rep.randomTested;
    auto d = dwellTime(ray, region, T);
    if (d.grazing()) rep.hits.push_back({ray, d.boundary});
  }
  rep.heuristicPass = rep.hits.empty();
  rep.verdict = rep.heuristicPass ? "HEURISTIC-PASS" : "FAIL-WITNESSED";
  return rep;
}

AlphaBracketResult alphaBracket(const Region& region, double T, const SearchOptions& opt) {
  auto interior = g2(region.withTopology(Topology::Interior), T, opt);
  auto closure = g2(region.withTopology(Topology::Closure), T, opt);
  AlphaBracketResult out;
  out.lo = 0.5 * interior.value;
  out.hi = 0.5 * closure.value;
  auto scan = grazingScan(region.withTopology(Topology::Closure), T, 256, opt.seed);
  if (scan.heuristicPass) {
    out.collapsed = true;
    out.alpha = out.hi;
    out.note = "no grazing ray found (heuristic); bracket collapsed to a single value; "
               "endpoints are upper-bound estimates";
  } else {
    out.note = "grazing witnessed; lower endpoint uses an upper-bound estimate of the "
               "interior quantity and may overstate the true lower bound";
  }
  return out;
}

}  // namespace obswave
