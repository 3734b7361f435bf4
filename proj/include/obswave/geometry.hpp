#pragma once
// Model closed manifolds (circle, flat 2-torus, round 2-sphere), measurable
// regions built from analytic primitives, and exact dwell times of unit-speed
// geodesics inside a region.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace obswave {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

/// Coordinates, interpreted per manifold:
///   Circle:     {x, 0, 0} with x in [0, 2pi)
///   FlatTorus2: {x, y, 0} in the fundamental domain [0,L1) x [0,L2)
///   Sphere2:    unit vector in R^3
using Point = std::array<double, 3>;

enum class ManifoldKind { Circle, FlatTorus2, Sphere2 };

struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::Circle;
  std::array<double, 2> periods{kTwoPi, 0.0};  // circle: {2pi,-}; torus: {L1,L2}

  static ManifoldSpec circle();
  static ManifoldSpec flatTorus(double L1 = 1.0, double L2 = 1.0);
  static ManifoldSpec sphere();

  double volume() const;  // 2pi, L1*L2, 4pi
  std::string name() const;
  bool operator==(const ManifoldSpec&) const = default;
};

enum class Topology { Interior, Closure };

// ---- region primitives ----------------------------------------------------

/// Arc [a, a+len) on the circle, len in (0, 2pi].
struct CircleArc {
  double a = 0.0;
  double len = kPi;
};

struct TorusRect {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
};

struct TorusTriangle {
  std::array<std::array<double, 2>, 3> v{};
};

/// Spherical cap {angle(p, axis) <= theta0}.
struct SphereCap {
  double theta0 = kPi / 2;
  std::array<double, 3> axis{0, 0, 1};
};

/// Colatitude band {theta0 <= angle(p, axis) <= theta1}.
struct SphereBand {
  double theta0 = 0, theta1 = kPi / 2;
  std::array<double, 3> axis{0, 0, 1};
};

using Primitive = std::variant<CircleArc, TorusRect, TorusTriangle, SphereCap, SphereBand>;

double primitiveMeasure(const ManifoldSpec& m, const Primitive& p);

class RegionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A measurable subset of the manifold: a finite union of pairwise-disjoint
/// analytic primitives, evaluated either as its interior or its closure.
class Region {
 public:
  Region(ManifoldSpec manifold, std::vector<Primitive> primitives, Topology topology);

  const ManifoldSpec& manifold() const { return manifold_; }
  const std::vector<Primitive>& primitives() const { return primitives_; }
  Topology topology() const { return topology_; }
  Region withTopology(Topology t) const;

  /// Exact measure (closed form per primitive).
  double measure() const;

  /// Indicator honoring the topology flag.
  bool contains(const Point& p) const;

 private:
  ManifoldSpec manifold_;
  std::vector<Primitive> primitives_;
  Topology topology_;
};

// ---- rays -----------------------------------------------------------------

/// A unit-speed geodesic. On the sphere the pair (origin, direction) is an
/// orthonormal frame so that gamma(t) = cos(t) origin + sin(t) direction is
/// free of trigonometric drift over many revolutions.
struct Ray {
  ManifoldKind kind = ManifoldKind::Circle;
  Point origin{};
  Point direction{};  // circle: {+-1,-,-}; torus: unit (dx,dy); sphere: unit tangent

  static Ray onCircle(double x0, int sign);
  static Ray onTorus(double x, double y, double angle);
  static Ray onTorusDir(double x, double y, double dx, double dy);
  static Ray onSphere(const Point& x0, const Point& xi0);
  /// Sphere ray from base point (theta,phi) and tangent angle psi measured
  /// from the south-pointing coordinate direction.
  static Ray onSphereAngles(double theta, double phi, double psi);
};

Point geodesicAt(const ManifoldSpec& m, const Ray& ray, double t);

/// The ray advanced by time t (same geodesic, shifted parameterization).
Ray advanceRay(const ManifoldSpec& m, const Ray& ray, double t);

// ---- dwell times ----------------------------------------------------------

/// Lebesgue measure of the times in [0,T] the geodesic spends strictly inside
/// the primitives, and on their boundaries (grazing). Computed from exact
/// entry/exit times, never by time sampling.
struct DwellTime {
  double inside = 0.0;    // strictly interior to some primitive
  double boundary = 0.0;  // on a primitive boundary for positive time
  int crossings = 0;      // number of entry/exit events enumerated

  double forTopology(Topology t) const {
    return t == Topology::Interior ? inside : inside + boundary;
  }
  bool grazing() const { return boundary > 1e-12; }
};

DwellTime dwellTime(const Ray& ray, const Region& region, double T);

/// dwellTime resolved through the region's topology flag.
double timeInRegion(const Ray& ray, const Region& region, double T);

}  // namespace obswave
