#include "obswave/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "trig_sum.hpp"

namespace obswave {
namespace {

using detail::TrigSum;

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
void gaussLegendre(int n, std::vector<double>& x, std::vector<double>& w) {
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

// Fully normalized associated Legendre P-bar_l^m(cos theta) including the
// sqrt((2l+1)/(4pi) (l-m)!/(l+m)!) factor; forward recurrence, no Gamma
// quotients. sinTheta must be nonnegative.
double legendreNormalized(int l, int m, double cosTheta, double sinTheta) {
  double pmm = std::sqrt(1.0 / (4.0 * kPi));
  for (int k = 1; k <= m; ++k) {
    pmm *= std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * sinTheta;
  }
  if (l == m) return pmm;
  double pm1 = std::sqrt(2.0 * m + 3.0) * cosTheta * pmm;
  if (l == m + 1) return pm1;
  double p = 0;
  for (int ll = m + 2; ll <= l; ++ll) {
    double a = std::sqrt((4.0 * ll * ll - 1.0) / ((double)ll * ll - (double)m * m));
    double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - (double)m * m) /
                         (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
    p = a * (cosTheta * pm1 - b * pmm);
    pmm = pm1;
    pm1 = p;
  }
  return p;
}

double sphereHarmonic(int l, int m, double cosTheta, double sinTheta, double phi) {
  int ma = std::abs(m);
  double p = legendreNormalized(l, ma, cosTheta, sinTheta);
  if (m == 0) return p;
  constexpr double sqrt2 = 1.41421356237309504880;
  return m > 0 ? sqrt2 * p * std::cos(ma * phi) : sqrt2 * p * std::sin(ma * phi);
}

bool descLess(const ModeDesc& a, const ModeDesc& b) {
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        return x.tie() < std::get<T>(b).tie();
      },
      a);
}

// 1D factor of a torus mode along one axis, as a trig sum (period L).
TrigSum torusAxisFactor(int k, int tag, double L) {
  if (k == 0) return detail::trigConst(1.0 / std::sqrt(L));
  double amp = std::sqrt(2.0 / L), f = kTwoPi * k / L;
  return tag == 0 ? detail::trigCos(amp, f) : detail::trigSin(amp, f);
}

double evalTrigSum(const TrigSum& s, double x) {
  double v = 0;
  for (const auto& t : s) v += t.amp * (t.xpow ? x : 1.0) * std::cos(t.freq * x + t.phase);
  return v;
}

TrigSum circleFactor(const CircleModeDesc& d) {
  double amp = std::sqrt(1.0 / kPi);
  return d.isCos ? detail::trigCos(amp, d.j) : detail::trigSin(amp, d.j);
}

// integral over one torus triangle of f(x)*g(y), f,g pure trig sums
double triangleIntegral(const TorusTriangle& tri, const TrigSum& fx, const TrigSum& gy) {
  auto G = detail::antiderivative(gy);
  std::array<std::array<double, 2>, 3> v = tri.v;
  std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a[0] < b[0]; });
  double total = 0.0;
  auto slab = [&](double xl, double xr, const std::array<double, 2>& a0,
                  const std::array<double, 2>& a1, const std::array<double, 2>& b0,
                  const std::array<double, 2>& b1) {
    if (xr - xl < 1e-14) return;
    auto lineAt = [](const std::array<double, 2>& p, const std::array<double, 2>& q) {
      double alpha = (q[1] - p[1]) / (q[0] - p[0]);
      return std::pair(alpha, p[1] - alpha * p[0]);  // y = alpha x + beta
    };
    auto [aA, bA] = lineAt(a0, a1);
    auto [aB, bB] = lineAt(b0, b1);
    double xm = 0.5 * (xl + xr);
    double yA = aA * xm + bA, yB = aB * xm + bB;
    double at = yA >= yB ? aA : aB, bt = yA >= yB ? bA : bB;
    double ab = yA >= yB ? aB : aA, bb = yA >= yB ? bB : bA;
    TrigSum inner;  // G(y_top(x)) - G(y_bot(x))
    for (auto& t : detail::substLinear(G, at, bt)) inner.push_back(t);
    for (auto t : detail::substLinear(G, ab, bb)) {
      t.amp = -t.amp;
      inner.push_back(t);
    }
    total += detail::integrate(detail::mul(fx, inner), xl, xr);
  };
  // slabs [v0.x, v1.x] (edges v0v1, v0v2) and [v1.x, v2.x] (edges v1v2, v0v2)
  if (v[1][0] - v[0][0] > 1e-14) slab(v[0][0], v[1][0], v[0], v[1], v[0], v[2]);
  if (v[2][0] - v[1][0] > 1e-14) slab(v[1][0], v[2][0], v[1], v[2], v[0], v[2]);
  return total;
}

struct SphereQuadNodes {
  std::vector<Point> points;
  std::vector<double> weights;
};

// per-primitive tensor grid: Gauss-Legendre in cos(theta) over the primitive's
// own colatitude interval (smooth chart, so convergence is fast), uniform in
// azimuth about the primitive's axis
SphereQuadNodes sphereNodes(const std::vector<Primitive>& prims, int nTheta, int nPhi) {
  SphereQuadNodes q;
  std::vector<double> gx, gw;
  gaussLegendre(nTheta, gx, gw);
  for (const auto& prim : prims) {
    double t0, t1;
    std::array<double, 3> ax;
    if (const auto* cap = std::get_if<SphereCap>(&prim)) {
      t0 = 0;
      t1 = cap->theta0;
      ax = cap->axis;
    } else {
      const auto& b = std::get<SphereBand>(prim);
      t0 = b.theta0;
      t1 = b.theta1;
      ax = b.axis;
    }
    Point n{ax[0], ax[1], ax[2]};
    Point ref = std::abs(n[2]) < 0.9 ? Point{0, 0, 1} : Point{1, 0, 0};
    Point e1{n[1] * ref[2] - n[2] * ref[1], n[2] * ref[0] - n[0] * ref[2],
             n[0] * ref[1] - n[1] * ref[0]};
    double ne1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (auto& c : e1) c /= ne1;
    Point e2{n[1] * e1[2] - n[2] * e1[1], n[2] * e1[0] - n[0] * e1[2],
             n[0] * e1[1] - n[1] * e1[0]};
    double uLo = std::cos(t1), uHi = std::cos(t0);
    for (int i = 0; i < nTheta; ++i) {
      double u = 0.5 * (uLo + uHi) + 0.5 * (uHi - uLo) * gx[i];
      double wu = 0.5 * (uHi - uLo) * gw[i];
      double s = std::sqrt(std::max(0.0, 1.0 - u * u));
      for (int k = 0; k < nPhi; ++k) {
        double phi = kTwoPi * (k + 0.5) / nPhi;
        double c1 = s * std::cos(phi), c2 = s * std::sin(phi);
        q.points.push_back({c1 * e1[0] + c2 * e2[0] + u * n[0],
                            c1 * e1[1] + c2 * e2[1] + u * n[1],
                            c1 * e1[2] + c2 * e2[2] + u * n[2]});
        q.weights.push_back(wu * kTwoPi / nPhi);
      }
    }
  }
  return q;
}

Eigen::MatrixXd sphereMass(const SpectralBasis& basis, const Region& region, int first,
                           int last, int nTheta, int nPhi) {
  auto q = sphereNodes(region.primitives(), nTheta, nPhi);
  int m = last - first;
  Eigen::MatrixXd phi(m, (Eigen::Index)q.points.size());
  for (int j = 0; j < m; ++j) {
    const auto& mode = basis.modes()[first + j];
    for (size_t k = 0; k < q.points.size(); ++k)
      phi(j, (Eigen::Index)k) = evalMode(basis.manifold(), mode, q.points[k]);
  }
  Eigen::VectorXd w =
      Eigen::Map<const Eigen::VectorXd>(q.weights.data(), (Eigen::Index)q.weights.size());
  Eigen::MatrixXd M = phi * w.asDiagonal() * phi.transpose();
  return 0.5 * (M + M.transpose());
}

}  // namespace

std::string describeMode(const EigenMode& mode) {
  char buf[64];
  if (const auto* c = std::get_if<CircleModeDesc>(&mode.desc)) {
    std::snprintf(buf, sizeof buf, "%s(%dx)", c->isCos ? "cos" : "sin", c->j);
  } else if (const auto* t = std::get_if<TorusModeDesc>(&mode.desc)) {
    std::snprintf(buf, sizeof buf, "k=(%d%s,%d%s)", t->k1, t->tag1 ? "s" : "c", t->k2,
                  t->tag2 ? "s" : "c");
  } else {
    const auto& s = std::get<SphereModeDesc>(mode.desc);
    std::snprintf(buf, sizeof buf, "Y(l=%d,m=%d)", s.l, s.m);
  }
  return buf;
}

SpectralBasis SpectralBasis::build(const ManifoldSpec& manifold, double lambdaMax) {
  constexpr double tol = 1e-12;
  SpectralBasis b;
  b.manifold_ = manifold;
  b.lambdaMax_ = lambdaMax;
  auto& modes = b.modes_;
  switch (manifold.kind) {
    case ManifoldKind::Circle:
      for (int j = 1; j <= (int)(lambdaMax + tol); ++j) {
        modes.push_back({0, (double)j, CircleModeDesc{j, false}});
        modes.push_back({0, (double)j, CircleModeDesc{j, true}});
      }
      break;
    case ManifoldKind::FlatTorus2: {
      double L1 = manifold.periods[0], L2 = manifold.periods[1];
      int k1max = (int)(lambdaMax * L1 / kTwoPi + 1);
      int k2max = (int)(lambdaMax * L2 / kTwoPi + 1);
      for (int k1 = 0; k1 <= k1max; ++k1)
        for (int k2 = 0; k2 <= k2max; ++k2) {
          if (k1 == 0 && k2 == 0) continue;
          double lam = kTwoPi * std::hypot(k1 / L1, k2 / L2);
          if (lam > lambdaMax + tol) continue;
          for (int t1 : k1 == 0 ? std::vector<int>{0} : std::vector<int>{0, 1})
            for (int t2 : k2 == 0 ? std::vector<int>{0} : std::vector<int>{0, 1})
              modes.push_back({0, lam, TorusModeDesc{k1, k2, t1, t2}});
        }
      break;
    }
    case ManifoldKind::Sphere2:
      for (int l = 1; l * (l + 1.0) <= lambdaMax * lambdaMax + tol; ++l) {
        double lam = std::sqrt(l * (l + 1.0));
        for (int m = -l; m <= l; ++m) modes.push_back({0, lam, SphereModeDesc{l, m}});
      }
      break;
  }
  if (modes.empty())
    throw SpectralError("frequency cutoff below the first positive frequency");
  std::sort(modes.begin(), modes.end(), [](const EigenMode& a, const EigenMode& c) {
    if (std::abs(a.lambda - c.lambda) > 1e-12) return a.lambda < c.lambda;
    return descLess(a.desc, c.desc);
  });
  for (int i = 0; i < (int)modes.size(); ++i) modes[i].index = i + 1;
  // eigenspaces: group equal frequencies (tolerant comparison)
  int start = 0;
  for (int i = 1; i <= (int)modes.size(); ++i) {
    if (i == (int)modes.size() ||
        modes[i].lambda - modes[start].lambda > 1e-9 * std::max(1.0, modes[start].lambda)) {
      b.spaces_.push_back({start, i, modes[start].lambda});
      start = i;
    }
  }
  return b;
}

double SpectralBasis::minGap() const {
  double g = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < spaces_.size(); ++i)
    g = std::min(g, spaces_[i].lambda - spaces_[i - 1].lambda);
  return g;
}

int SpectralBasis::alignDown(int n) const {
  int best = 0;
  for (const auto& s : spaces_)
    if (s.last <= n) best = s.last;
  return best;
}

double evalMode(const ManifoldSpec& manifold, const EigenMode& mode, const Point& p) {
  switch (manifold.kind) {
    case ManifoldKind::Circle: {
      const auto& d = std::get<CircleModeDesc>(mode.desc);
      double a = std::sqrt(1.0 / kPi);
      return d.isCos ? a * std::cos(d.j * p[0]) : a * std::sin(d.j * p[0]);
    }
    case ManifoldKind::FlatTorus2: {
      const auto& d = std::get<TorusModeDesc>(mode.desc);
      return evalTrigSum(torusAxisFactor(d.k1, d.tag1, manifold.periods[0]), p[0]) *
             evalTrigSum(torusAxisFactor(d.k2, d.tag2, manifold.periods[1]), p[1]);
    }
    case ManifoldKind::Sphere2: {
      const auto& d = std::get<SphereModeDesc>(mode.desc);
      double ct = p[2];
      double st = std::hypot(p[0], p[1]);
      double phi = std::atan2(p[1], p[0]);
      return sphereHarmonic(d.l, d.m, ct, st, phi);
    }
  }
  return 0;
}

MassMatrix massMatrix(const SpectralBasis& basis, const Region& region, int first, int last,
                      const QuadratureSpec& quad) {
  if (first < 0 || last > basis.size() || first >= last)
    throw SpectralError("mass matrix mode range out of bounds");
  const auto& m = basis.manifold();
  int n = last - first;
  MassMatrix out;
  out.first = first;
  out.last = last;
  if (m.kind == ManifoldKind::Circle || m.kind == ManifoldKind::FlatTorus2) {
    out.provenance = "analytic";
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a)
      for (int c = a; c < n; ++c) {
        double val = 0;
        if (m.kind == ManifoldKind::Circle) {
          auto fa = circleFactor(std::get<CircleModeDesc>(basis.modes()[first + a].desc));
          auto fc = circleFactor(std::get<CircleModeDesc>(basis.modes()[first + c].desc));
          auto prod = detail::mul(fa, fc);
          for (const auto& prim : region.primitives()) {
            const auto& arc = std::get<CircleArc>(prim);
            val += detail::integrate(prod, arc.a, arc.a + arc.len);
          }
        } else {
          const auto& da = std::get<TorusModeDesc>(basis.modes()[first + a].desc);
          const auto& dc = std::get<TorusModeDesc>(basis.modes()[first + c].desc);
          auto fx = detail::mul(torusAxisFactor(da.k1, da.tag1, m.periods[0]),
                                torusAxisFactor(dc.k1, dc.tag1, m.periods[0]));
          auto gy = detail::mul(torusAxisFactor(da.k2, da.tag2, m.periods[1]),
                                torusAxisFactor(dc.k2, dc.tag2, m.periods[1]));
          for (const auto& prim : region.primitives()) {
            if (const auto* r = std::get_if<TorusRect>(&prim)) {
              val += detail::integrate(fx, r->x0, r->x1) * detail::integrate(gy, r->y0, r->y1);
            } else {
              val += triangleIntegral(std::get<TorusTriangle>(prim), fx, gy);
            }
          }
        }
        M(a, c) = M(c, a) = val;
      }
    out.m = M;
    return out;
  }
  // sphere: tensor quadrature with order doubling until entrywise change < 1e-8
  int lmax = 1;
  for (const auto& mode : basis.modes())
    lmax = std::max(lmax, std::get<SphereModeDesc>(mode.desc).l);
  int nTheta = quad.thetaOrder > 0 ? quad.thetaOrder : 2 * (lmax + 2);
  int nPhi = quad.phiOrder > 0 ? quad.phiOrder : 4 * (lmax + 1);
  Eigen::MatrixXd prev = sphereMass(basis, region, first, last, nTheta, nPhi);
  for (int round = 0;; ++round) {
    nTheta *= 2;
    nPhi *= 2;
    Eigen::MatrixXd cur = sphereMass(basis, region, first, last, nTheta, nPhi);
    double diff = (cur - prev).cwiseAbs().maxCoeff();
    if (diff < 1e-8) {
      char buf[48];
      std::snprintf(buf, sizeof buf, "quadrature(%dx%d)", nTheta, nPhi);
      out.provenance = buf;
      out.m = cur;
      return out;
    }
    if (round >= 3)
      throw QuadratureError("sphere mass quadrature did not converge",
                            prev.maxCoeff(), cur.maxCoeff());
    prev = cur;
  }
}

Eigen::MatrixXd eigenspaceBlock(const MassMatrix& mass, const Eigenspace& space) {
  if (space.first < mass.first || space.last > mass.last)
    throw SpectralError("eigenspace outside mass matrix range");
  return mass.m.block(space.first - mass.first, space.first - mass.first, space.size(),
                      space.size());
}

}  // namespace obswave
