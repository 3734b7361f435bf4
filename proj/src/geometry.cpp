#include "obswave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace obswave {
namespace {

constexpr double kGeomEps = 1e-10;   // on-boundary classification tolerance
constexpr double kDegenerate = 1e-13;

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  return r;
}

double dot3(const Point& a, const Point& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double norm3(const Point& a) { return std::sqrt(dot3(a, a)); }

Point scaled(const Point& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

Point axpy(double s, const Point& a, const Point& b) {
  return {s * a[0] + b[0], s * a[1] + b[1], s * a[2] + b[2]};
}

// Snap values that are within one ulp-cluster of a "nice" trig value, so that
// axis-aligned torus rays and equatorial sphere rays are represented exactly.
double snapTrig(double v) {
  for (double s : {0.0, 1.0, -1.0}) {
    if (std::abs(v - s) < 1e-15) return s;
  }
  return v;
}

using Interval = std::pair<double, double>;

double mergedLength(std::vector<Interval>& iv) {
  if (iv.empty()) return 0.0;
  std::sort(iv.begin(), iv.end());
  double total = 0.0, lo = iv[0].first, hi = iv[0].second;
  for (size_t i = 1; i < iv.size(); ++i) {
    if (iv[i].first > hi) {
      total += hi - lo;
      lo = iv[i].first;
      hi = iv[i].second;
    } else {
      hi = std::max(hi, iv[i].second);
    }
  }
  return total + (hi - lo);
}

// Length of (union of b) minus (union of a); both get sorted/merged.
double lengthMinus(std::vector<Interval>& b, std::vector<Interval>& a) {
  double ub = mergedLength(b);
  std::vector<Interval> both = b;
  both.insert(both.end(), a.begin(), a.end());
  double uall = mergedLength(both);
  double ua = mergedLength(a);
  return ub - (ub + ua - uall);  // |B| - |A∩B|
}

// ---- torus polygons -------------------------------------------------------

struct ConvexPoly {
  std::vector<std::array<double, 2>> v;        // CCW vertices
  std::vector<std::array<double, 2>> normal;   // inward unit normals per edge
  std::vector<double> offset;                  // n·x >= offset inside
};

ConvexPoly makePoly(std::vector<std::array<double, 2>> verts) {
  // enforce CCW
  double area2 = 0;
  size_t n = verts.size();
  for (size_t i = 0; i < n; ++i) {
    auto& p = verts[i];
    auto& q = verts[(i + 1) % n];
    area2 += p[0] * q[1] - q[0] * p[1];
  }
  if (area2 < 0) std::reverse(verts.begin(), verts.end());
  ConvexPoly poly;
  poly.v = verts;
  for (size_t i = 0; i < n; ++i) {
    auto& p = poly.v[i];
    auto& q = poly.v[(i + 1) % n];
    double ex = q[0] - p[0], ey = q[1] - p[1];
    double len = std::hypot(ex, ey);
    if (len < kDegenerate) throw RegionError("degenerate polygon edge");
    std::array<double, 2> nrm{-ey / len, ex / len};  // inward for CCW
    poly.normal.push_back(nrm);
    poly.offset.push_back(nrm[0] * p[0] + nrm[1] * p[1]);
  }
  return poly;
}

void polyBounds(const ConvexPoly& p, std::array<double, 4>& box) {
  box = {1e300, -1e300, 1e300, -1e300};
  for (const auto& v : p.v) {
    box[0] = std::min(box[0], v[0]);
    box[1] = std::max(box[1], v[0]);
    box[2] = std::min(box[2], v[1]);
    box[3] = std::max(box[3], v[1]);
  }
}

ConvexPoly toPoly(const TorusRect& r) {
  if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) throw RegionError("empty torus rectangle");
  return makePoly({{{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}}});
}

ConvexPoly toPoly(const TorusTriangle& t) {
  return makePoly({t.v[0], t.v[1], t.v[2]});
}

double polyArea(const ConvexPoly& p) {
  double a2 = 0;
  size_t n = p.v.size();
  for (size_t i = 0; i < n; ++i) {
    auto& u = p.v[i];
    auto& w = p.v[(i + 1) % n];
    a2 += u[0] * w[1] - w[0] * u[1];
  }
  return 0.5 * std::abs(a2);
}

// Sutherland-Hodgman clip of convex polygon a by convex polygon b.
double overlapArea(const ConvexPoly& a, const ConvexPoly& b) {
  std::vector<std::array<double, 2>> cur = a.v;
  for (size_t e = 0; e < b.v.size(); ++e) {
    std::vector<std::array<double, 2>> next;
    auto n = b.normal[e];
    double off = b.offset[e];
    size_t m = cur.size();
    for (size_t i = 0; i < m && m >= 1; ++i) {
      auto& p = cur[i];
      auto& q = cur[(i + 1) % m];
      double dp = n[0] * p[0] + n[1] * p[1] - off;
      double dq = n[0] * q[0] + n[1] * q[1] - off;
      if (dp >= 0) next.push_back(p);
      if ((dp > 0 && dq < 0) || (dp < 0 && dq > 0)) {
        double s = dp / (dp - dq);
        next.push_back({p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])});
      }
    }
    cur = std::move(next);
    if (cur.size() < 3) return 0.0;
  }
  ConvexPoly clipped;
  clipped.v = cur;
  return polyArea(clipped);
}

// Clip the segment p0 + t*d, t in [0,T], against a lattice-shifted copy of a
// convex polygon. Returns false if empty; classifies the clipped interval as
// boundary when the segment rides along a polygon edge.
bool clipSegment(const ConvexPoly& poly, const std::array<double, 2>& p0,
                 const std::array<double, 2>& d, double T, double sx, double sy,
                 Interval& out, bool& onBoundary) {
  double tlo = 0.0, thi = T;
  onBoundary = false;
  for (size_t e = 0; e < poly.v.size(); ++e) {
    auto n = poly.normal[e];
    double off = poly.offset[e] + n[0] * sx + n[1] * sy;
    double nd = n[0] * d[0] + n[1] * d[1];
    double np = n[0] * p0[0] + n[1] * p0[1] - off;
    if (std::abs(nd) < kDegenerate) {
      if (np < -kGeomEps) return false;          // parallel, fully outside
      if (std::abs(np) <= kGeomEps) onBoundary = true;  // riding this edge line
    } else if (nd > 0) {
      tlo = std::max(tlo, -np / nd);
    } else {
      thi = std::min(thi, -np / nd);
    }
    if (tlo >= thi) return false;
  }
  out = {tlo, thi};
  return true;
}

// Enumerate (once per ray) the lattice cells the unfolded segment traverses,
// so each region polygon is clipped only against its translates along the
// path. A ray riding a gridline also gets the neighbor cells on both sides.
void torusCells(const ManifoldSpec& m, const std::array<double, 2>& p0,
                const std::array<double, 2>& d, double T,
                std::vector<std::pair<long, long>>& cells) {
  const double L1 = m.periods[0], L2 = m.periods[1];
  // axis crossing times
  std::vector<double> ts;
  ts.reserve((size_t)(T * (std::abs(d[0]) / L1 + std::abs(d[1]) / L2)) + 8);
  ts.push_back(0.0);
  ts.push_back(T);
  for (int axis = 0; axis < 2; ++axis) {
    double L = axis == 0 ? L1 : L2;
    double v = d[axis], x = p0[axis];
    if (std::abs(v) < kDegenerate) continue;
    double xEnd = x + T * v;
    long k0 = (long)std::floor(std::min(x, xEnd) / L) - 1;
    long k1 = (long)std::floor(std::max(x, xEnd) / L) + 1;
    for (long k = k0; k <= k1; ++k) {
      double t = (k * L - x) / v;
      if (t > 0 && t < T) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());
  cells.clear();
  cells.reserve(ts.size() + 2);
  for (size_t i = 0; i + 1 < ts.size(); ++i) {
    double tm = 0.5 * (ts[i] + ts[i + 1]);
    std::pair<long, long> c{(long)std::floor((p0[0] + tm * d[0]) / L1),
                            (long)std::floor((p0[1] + tm * d[1]) / L2)};
    if (cells.empty() || cells.back() != c) cells.push_back(c);
  }
  for (int axis = 0; axis < 2; ++axis) {
    double L = axis == 0 ? L1 : L2;
    if (std::abs(d[axis]) < kDegenerate &&
        std::abs(p0[axis] - std::round(p0[axis] / L) * L) <= kGeomEps) {
      size_t n = cells.size();
      for (size_t i = 0; i < n; ++i) {
        auto c = cells[i];
        cells.push_back(axis == 0 ? std::make_pair(c.first - 1, c.second)
                                  : std::make_pair(c.first, c.second - 1));
        cells.push_back(axis == 0 ? std::make_pair(c.first + 1, c.second)
                                  : std::make_pair(c.first, c.second + 1));
      }
    }
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
}

// ---- sphere primitive intervals ------------------------------------------
// gamma(t)·axis = A cos t + B sin t = R cos(t - psi). Inside set per primitive
// is a union of arcs per revolution, solved in closed form.

void sphereLevelIntervals(double A, double B, double cLo, double cHi, double T,
                          std::vector<Interval>& inside, std::vector<Interval>& boundary) {
  // inside: cLo <= f(t) <= cHi   (cap: cLo = cos(theta0), cHi = +inf)
  double R = std::hypot(A, B);
  if (R < kDegenerate) {
    // f == 0 identically
    if (std::abs(cLo) <= kGeomEps || (cHi < 1e300 && std::abs(cHi) <= kGeomEps)) {
      boundary.push_back({0.0, T});
    } else if (cLo < 0 && 0 < cHi) {
      inside.push_back({0.0, T});
    }
    return;
  }
  double psi = std::atan2(B, A);
  // |t-psi| in [alphaHi, alphaLo] modulo 2pi, where alpha = acos(c/R)
  double rLo = cLo / R, rHi = cHi / R;
  if (rLo >= 1.0 || rHi <= -1.0) return;  // empty (tangencies have measure zero)
  double alphaLo = rLo <= -1.0 ? kPi : std::acos(rLo);   // f >= cLo  <=>  |t-psi| <= alphaLo
  double alphaHi = rHi >= 1.0 ? 0.0 : std::acos(rHi);    // f <= cHi  <=>  |t-psi| >= alphaHi
  if (alphaHi >= alphaLo) return;
  auto pushArc = [&](double lo, double hi) {
    if (hi <= lo) return;
    long k0 = (long)std::floor((0.0 - hi) / kTwoPi);
    long k1 = (long)std::floor((T - lo) / kTwoPi) + 1;
    for (long k = k0; k <= k1; ++k) {
      double a = std::max(0.0, lo + k * kTwoPi);
      double b = std::min(T, hi + k * kTwoPi);
      if (b > a) inside.push_back({a, b});
    }
  };
  if (alphaHi <= kDegenerate) {
    pushArc(psi - alphaLo, psi + alphaLo);
  } else {
    pushArc(psi + alphaHi, psi + alphaLo);
    pushArc(psi - alphaLo, psi - alphaHi);
  }
}

void spherePrimDwell(const Primitive& prim, const Ray& ray, double T,
                     std::vector<Interval>& inside, std::vector<Interval>& boundary) {
  const auto* cap = std::get_if<SphereCap>(&prim);
  const auto* band = std::get_if<SphereBand>(&prim);
  Point axis = cap ? Point{cap->axis[0], cap->axis[1], cap->axis[2]}
                   : Point{band->axis[0], band->axis[1], band->axis[2]};
  double A = dot3(ray.origin, axis);
  double B = dot3(ray.direction, axis);
  if (cap) {
    sphereLevelIntervals(A, B, snapTrig(std::cos(cap->theta0)), 1e301, T, inside, boundary);
  } else {
    sphereLevelIntervals(A, B, snapTrig(std::cos(band->theta1)),
                         snapTrig(std::cos(band->theta0)), T, inside, boundary);
  }
}

// ---- primitive containment ------------------------------------------------

// -1 outside, 0 on boundary, +1 strictly inside
int circleArcSide(const CircleArc& arc, double x) {
  double u = wrap(x - arc.a, kTwoPi);
  if (std::abs(arc.len - kTwoPi) < kDegenerate) return 1;  // full circle
  if (u <= kGeomEps || std::abs(u - kTwoPi) <= kGeomEps) return 0;
  if (std::abs(u - arc.len) <= kGeomEps) return 0;
  return u < arc.len ? 1 : -1;
}

int polySide(const ConvexPoly& poly, double x, double y) {
  int side = 1;
  for (size_t e = 0; e < poly.v.size(); ++e) {
    double v = poly.normal[e][0] * x + poly.normal[e][1] * y - poly.offset[e];
    if (v < -kGeomEps) return -1;
    if (v <= kGeomEps) side = 0;
  }
  return side;
}

int torusPolySide(const ConvexPoly& poly, const ManifoldSpec& m, double x, double y) {
  int best = -1;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j)
      best = std::max(best, polySide(poly, x + i * m.periods[0], y + j * m.periods[1]));
  return best;
}

int sphereSide(const Primitive& prim, const Point& p) {
  const auto* cap = std::get_if<SphereCap>(&prim);
  const auto* band = std::get_if<SphereBand>(&prim);
  Point axis = cap ? Point{cap->axis[0], cap->axis[1], cap->axis[2]}
                   : Point{band->axis[0], band->axis[1], band->axis[2]};
  double c = dot3(p, axis);
  double lo = snapTrig(band ? std::cos(band->theta1) : std::cos(cap->theta0));
  double hi = band ? snapTrig(std::cos(band->theta0)) : 2.0;
  if (c < lo - kGeomEps || c > hi + kGeomEps) return -1;
  if (c <= lo + kGeomEps || (band && c >= hi - kGeomEps)) return 0;
  return 1;
}

void validatePrimitive(const ManifoldSpec& m, const Primitive& p) {
  bool ok = false;
  switch (m.kind) {
    case ManifoldKind::Circle:
      ok = std::holds_alternative<CircleArc>(p);
      break;
    case ManifoldKind::FlatTorus2:
      ok = std::holds_alternative<TorusRect>(p) || std::holds_alternative<TorusTriangle>(p);
      break;
    case ManifoldKind::Sphere2:
      ok = std::holds_alternative<SphereCap>(p) || std::holds_alternative<SphereBand>(p);
      break;
  }
  if (!ok) throw RegionError("primitive does not match manifold " + m.name());
  if (const auto* arc = std::get_if<CircleArc>(&p)) {
    if (!(arc->len > 0) || arc->len > kTwoPi + kDegenerate)
      throw RegionError("arc length must lie in (0, 2pi]");
  }
  if (const auto* cap = std::get_if<SphereCap>(&p)) {
    if (!(cap->theta0 > 0) || cap->theta0 > kPi + kDegenerate)
      throw RegionError("cap angle must lie in (0, pi]");
    if (std::abs(norm3({cap->axis[0], cap->axis[1], cap->axis[2]}) - 1.0) > 1e-9)
      throw RegionError("cap axis must be a unit vector");
  }
  if (const auto* band = std::get_if<SphereBand>(&p)) {
    if (!(band->theta1 > band->theta0) || band->theta0 < -kDegenerate ||
        band->theta1 > kPi + kDegenerate)
      throw RegionError("band angles must satisfy 0 <= theta0 < theta1 <= pi");
    if (std::abs(norm3({band->axis[0], band->axis[1], band->axis[2]}) - 1.0) > 1e-9)
      throw RegionError("band axis must be a unit vector");
  }
}

// colatitude interval of a cap/band primitive about its own axis
std::pair<double, double> sphereThetaInterval(const Primitive& p) {
  if (const auto* cap = std::get_if<SphereCap>(&p)) return {0.0, cap->theta0};
  const auto& band = std::get<SphereBand>(p);
  return {band.theta0, band.theta1};
}

Point sphereAxis(const Primitive& p) {
  if (const auto* cap = std::get_if<SphereCap>(&p))
    return {cap->axis[0], cap->axis[1], cap->axis[2]};
  const auto& band = std::get<SphereBand>(p);
  return {band.axis[0], band.axis[1], band.axis[2]};
}

void validateDisjoint(const ManifoldSpec& m, const std::vector<Primitive>& prims) {
  constexpr double kOverlapTol = 1e-9;
  for (size_t i = 0; i < prims.size(); ++i) {
    for (size_t j = i + 1; j < prims.size(); ++j) {
      switch (m.kind) {
        case ManifoldKind::Circle: {
          const auto& a = std::get<CircleArc>(prims[i]);
          const auto& b = std::get<CircleArc>(prims[j]);
          // overlap length of [0,a.len) and the shifted copy of b, mod 2pi
          double s = wrap(b.a - a.a, kTwoPi);
          double ov = std::max(0.0, std::min(a.len, s + b.len) - s) +
                      std::max(0.0, std::min(a.len, s - kTwoPi + b.len));
          if (ov > kOverlapTol) throw RegionError("overlapping circle arcs");
          break;
        }
        case ManifoldKind::FlatTorus2: {
          auto pa = std::holds_alternative<TorusRect>(prims[i])
                        ? toPoly(std::get<TorusRect>(prims[i]))
                        : toPoly(std::get<TorusTriangle>(prims[i]));
          auto pb = std::holds_alternative<TorusRect>(prims[j])
                        ? toPoly(std::get<TorusRect>(prims[j]))
                        : toPoly(std::get<TorusTriangle>(prims[j]));
          double ov = 0;
          for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
              ConvexPoly shifted = pb;
              for (auto& v : shifted.v) {
                v[0] += di * m.periods[0];
                v[1] += dj * m.periods[1];
              }
              shifted = makePoly(shifted.v);
              ov += overlapArea(pa, shifted);
            }
          if (ov > kOverlapTol) throw RegionError("overlapping torus primitives");
          break;
        }
        case ManifoldKind::Sphere2: {
          auto [a0, a1] = sphereThetaInterval(prims[i]);
          auto [b0, b1] = sphereThetaInterval(prims[j]);
          Point na = sphereAxis(prims[i]), nb = sphereAxis(prims[j]);
          double psi = std::acos(std::clamp(dot3(na, nb), -1.0, 1.0));
          // a point at colatitudes (ta, tb) from the two axes exists iff
          // |ta - tb| <= psi <= ta + tb and ta + tb <= 2pi - psi
          double lo = std::max(a0 - b1, b0 - a1);  // minimal |ta-tb| attainable
          bool sepAngular = lo >= psi - kOverlapTol;
          bool sepSum = a1 + b1 <= psi + kOverlapTol;
          bool sepAntipodal = a0 + b0 >= kTwoPi - psi - kOverlapTol;
          if (!sepSum && !sepAngular && !sepAntipodal)
            throw RegionError("overlapping sphere primitives");
          break;
        }
      }
    }
  }
}

}  // namespace

// ---- ManifoldSpec ---------------------------------------------------------

ManifoldSpec ManifoldSpec::circle() { return {ManifoldKind::Circle, {kTwoPi, 0.0}}; }

ManifoldSpec ManifoldSpec::flatTorus(double L1, double L2) {
  if (!(L1 > 0) || !(L2 > 0)) throw RegionError("torus periods must be positive");
  return {ManifoldKind::FlatTorus2, {L1, L2}};
}

ManifoldSpec ManifoldSpec::sphere() { return {ManifoldKind::Sphere2, {0.0, 0.0}}; }

double ManifoldSpec::volume() const {
  switch (kind) {
    case ManifoldKind::Circle:
      return kTwoPi;
    case ManifoldKind::FlatTorus2:
      return periods[0] * periods[1];
    case ManifoldKind::Sphere2:
      return 4.0 * kPi;
  }
  return 0.0;
}

std::string ManifoldSpec::name() const {
  switch (kind) {
    case ManifoldKind::Circle:
      return "circle";
    case ManifoldKind::FlatTorus2:
      return "torus";
    case ManifoldKind::Sphere2:
      return "sphere";
  }
  return "?";
}

// ---- primitives / region --------------------------------------------------

double primitiveMeasure(const ManifoldSpec& m, const Primitive& p) {
  switch (m.kind) {
    case ManifoldKind::Circle:
      return std::get<CircleArc>(p).len;
    case ManifoldKind::FlatTorus2:
      if (const auto* r = std::get_if<TorusRect>(&p))
        return (r->x1 - r->x0) * (r->y1 - r->y0);
      return polyArea(toPoly(std::get<TorusTriangle>(p)));
    case ManifoldKind::Sphere2:
      if (const auto* cap = std::get_if<SphereCap>(&p))
        return kTwoPi * (1.0 - std::cos(cap->theta0));
      else {
        const auto& b = std::get<SphereBand>(p);
        return kTwoPi * (std::cos(b.theta0) - std::cos(b.theta1));
      }
  }
  return 0.0;
}

Region::Region(ManifoldSpec manifold, std::vector<Primitive> primitives, Topology topology)
    : manifold_(manifold), primitives_(std::move(primitives)), topology_(topology) {
  for (const auto& p : primitives_) validatePrimitive(manifold_, p);
  validateDisjoint(manifold_, primitives_);
  double mu = measure();
  if (mu > manifold_.volume() + 1e-9) throw RegionError("region measure exceeds manifold volume");
}

Region Region::withTopology(Topology t) const {
  Region r = *this;
  r.topology_ = t;
  return r;
}

double Region::measure() const {
  double mu = 0;
  for (const auto& p : primitives_) mu += primitiveMeasure(manifold_, p);
  return mu;
}

bool Region::contains(const Point& pt) const {
  int best = -1;
  for (const auto& p : primitives_) {
    int s = -1;
    switch (manifold_.kind) {
      case ManifoldKind::Circle:
        s = circleArcSide(std::get<CircleArc>(p), pt[0]);
        break;
      case ManifoldKind::FlatTorus2: {
        auto poly = std::holds_alternative<TorusRect>(p) ? toPoly(std::get<TorusRect>(p))
                                                         : toPoly(std::get<TorusTriangle>(p));
        s = torusPolySide(poly, manifold_, pt[0], pt[1]);
        break;
      }
      case ManifoldKind::Sphere2:
        s = sphereSide(p, pt);
        break;
    }
    best = std::max(best, s);
    if (best == 1) break;
  }
  return topology_ == Topology::Interior ? best == 1 : best >= 0;
}

// ---- rays -----------------------------------------------------------------

Ray Ray::onCircle(double x0, int sign) {
  if (sign != 1 && sign != -1) throw RegionError("circle ray direction must be +-1");
  return {ManifoldKind::Circle, {wrap(x0, kTwoPi), 0, 0}, {(double)sign, 0, 0}};
}

Ray Ray::onTorus(double x, double y, double angle) {
  return onTorusDir(x, y, snapTrig(std::cos(angle)), snapTrig(std::sin(angle)));
}

Ray Ray::onTorusDir(double x, double y, double dx, double dy) {
  double n = std::hypot(dx, dy);
  if (n < kDegenerate) throw RegionError("torus ray direction must be nonzero");
  return {ManifoldKind::FlatTorus2, {x, y, 0}, {dx / n, dy / n, 0}};
}

Ray Ray::onSphere(const Point& x0, const Point& xi0) {
  Point p = x0;
  double np = norm3(p);
  if (np < kDegenerate) throw RegionError("sphere ray base point must be nonzero");
  p = scaled(p, 1.0 / np);
  // Gram-Schmidt the direction against the base point
  Point d = axpy(-dot3(xi0, p), p, xi0);
  double nd = norm3(d);
  if (nd < kDegenerate) throw RegionError("sphere ray direction parallel to base point");
  d = scaled(d, 1.0 / nd);
  return {ManifoldKind::Sphere2, p, d};
}

Ray Ray::onSphereAngles(double theta, double phi, double psi) {
  double st = snapTrig(std::sin(theta)), ct = snapTrig(std::cos(theta));
  double sp = snapTrig(std::sin(phi)), cp = snapTrig(std::cos(phi));
  Point p{st * cp, st * sp, ct};
  Point eTheta{ct * cp, ct * sp, -st};
  Point ePhi{-sp, cp, 0.0};
  double cpsi = snapTrig(std::cos(psi)), spsi = snapTrig(std::sin(psi));
  Point d{cpsi * eTheta[0] + spsi * ePhi[0], cpsi * eTheta[1] + spsi * ePhi[1],
          cpsi * eTheta[2] + spsi * ePhi[2]};
  return {ManifoldKind::Sphere2, p, d};
}

Point geodesicAt(const ManifoldSpec& m, const Ray& ray, double t) {
  switch (m.kind) {
    case ManifoldKind::Circle:
      return {wrap(ray.origin[0] + ray.direction[0] * t, kTwoPi), 0, 0};
    case ManifoldKind::FlatTorus2:
      return {wrap(ray.origin[0] + t * ray.direction[0], m.periods[0]),
              wrap(ray.origin[1] + t * ray.direction[1], m.periods[1]), 0};
    case ManifoldKind::Sphere2: {
      double c = std::cos(t), s = std::sin(t);
      return axpy(c, ray.origin, scaled(ray.direction, s));
    }
  }
  return {};
}

Ray advanceRay(const ManifoldSpec& m, const Ray& ray, double t) {
  Ray r = ray;
  r.origin = geodesicAt(m, ray, t);
  if (m.kind == ManifoldKind::Sphere2) {
    double c = std::cos(t), s = std::sin(t);
    Point dirNew = axpy(-s, ray.origin, scaled(ray.direction, c));
    // renormalize the frame to keep it orthonormal over long flows
    return Ray::onSphere(r.origin, dirNew);
  }
  return r;
}

// ---- dwell times ----------------------------------------------------------

DwellTime dwellTime(const Ray& ray, const Region& region, double T) {
  if (!(T > 0)) throw RegionError("dwell horizon must be positive");
  const auto& m = region.manifold();
  std::vector<Interval> inside, boundary;
  switch (m.kind) {
    case ManifoldKind::Circle: {
      // arcs have zero-dimensional boundaries: no positive boundary dwell
      double sigma = ray.direction[0];
      for (const auto& p : region.primitives()) {
        const auto& arc = std::get<CircleArc>(p);
        if (std::abs(arc.len - kTwoPi) < kDegenerate) {
          inside.push_back({0.0, T});
          continue;
        }
        // entry offset (in time) to the arc start, direction-resolved
        double u0 = sigma > 0 ? wrap(arc.a - ray.origin[0], kTwoPi)
                              : wrap(ray.origin[0] - (arc.a + arc.len), kTwoPi);
        for (double t0 = u0 - kTwoPi; t0 < T; t0 += kTwoPi) {
          double a = std::max(0.0, t0), b = std::min(T, t0 + arc.len);
          if (b > a) inside.push_back({a, b});
        }
      }
      break;
    }
    case ManifoldKind::FlatTorus2: {
      std::array<double, 2> p0{ray.origin[0], ray.origin[1]};
      std::array<double, 2> d{ray.direction[0], ray.direction[1]};
      std::vector<std::pair<long, long>> cells;
      torusCells(m, p0, d, T, cells);
      inside.reserve(cells.size());
      // reciprocal velocities for the cheap bounding-box pre-cull
      double ix = std::abs(d[0]) >= kDegenerate ? 1.0 / d[0] : 0.0;
      double iy = std::abs(d[1]) >= kDegenerate ? 1.0 / d[1] : 0.0;
      for (const auto& p : region.primitives()) {
        auto poly = std::holds_alternative<TorusRect>(p) ? toPoly(std::get<TorusRect>(p))
                                                         : toPoly(std::get<TorusTriangle>(p));
        std::array<double, 4> box;
        polyBounds(poly, box);
        for (const auto& [i, j] : cells) {
          double sx = i * m.periods[0], sy = j * m.periods[1];
          if (ix != 0.0) {
            double ta = (box[0] + sx - kGeomEps - p0[0]) * ix;
            double tb = (box[1] + sx + kGeomEps - p0[0]) * ix;
            if (std::max(std::min(ta, tb), 0.0) >= std::min(std::max(ta, tb), T)) continue;
          } else if (p0[0] < box[0] + sx - kGeomEps || p0[0] > box[1] + sx + kGeomEps) {
            continue;
          }
          if (iy != 0.0) {
            double ta = (box[2] + sy - kGeomEps - p0[1]) * iy;
            double tb = (box[3] + sy + kGeomEps - p0[1]) * iy;
            if (std::max(std::min(ta, tb), 0.0) >= std::min(std::max(ta, tb), T)) continue;
          } else if (p0[1] < box[2] + sy - kGeomEps || p0[1] > box[3] + sy + kGeomEps) {
            continue;
          }
          Interval iv;
          bool onb = false;
          if (clipSegment(poly, p0, d, T, sx, sy, iv, onb)) {
            (onb ? boundary : inside).push_back(iv);
          }
        }
      }
      break;
    }
    case ManifoldKind::Sphere2: {
      for (const auto& p : region.primitives()) spherePrimDwell(p, ray, T, inside, boundary);
      break;
    }
  }
  DwellTime dt;
  dt.crossings = (int)(inside.size() + boundary.size()) * 2;
  // boundary time not already counted inside
  dt.boundary = boundary.empty() ? 0.0 : lengthMinus(boundary, inside);
  dt.inside = mergedLength(inside);
  return dt;
}

double timeInRegion(const Ray& ray, const Region& region, double T) {
  return dwellTime(ray, region, T).forTopology(region.topology());
}

}  // namespace obswave
