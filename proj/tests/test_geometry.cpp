#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "obswave/geometry.hpp"

using namespace obswave;

namespace {

Region halfArc(Topology t = Topology::Interior) {
  return Region(ManifoldSpec::circle(), {CircleArc{0.0, kPi}}, t);
}

Region hemisphere(Topology t) {
  return Region(ManifoldSpec::sphere(), {SphereCap{kPi / 2, {0, 0, 1}}}, t);
}

Region strip(Topology t = Topology::Interior) {
  return Region(ManifoldSpec::flatTorus(), {TorusRect{0.2, 0.0, 0.4, 1.0}}, t);
}

// Sampled dwell time, used only as a consistency oracle for the exact one.
double riemannDwell(const Ray& ray, const Region& region, double T, double h) {
  const auto& m = region.manifold();
  double acc = 0;
  for (double t = h / 2; t < T; t += h)
    if (region.contains(geodesicAt(m, ray, t))) acc += h;
  return acc;
}

}  // namespace

TEST_CASE("exact measures of the primitives") {
  CHECK(halfArc().measure() == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(hemisphere(Topology::Interior).measure() == doctest::Approx(kTwoPi).epsilon(1e-14));
  CHECK(strip().measure() == doctest::Approx(0.2).epsilon(1e-14));

  // triangle area against the shoelace formula evaluated here
  TorusTriangle tri{{{{0.1, 0.1}, {0.6, 0.2}, {0.3, 0.8}}}};
  double shoelace = 0.5 * std::abs((0.6 - 0.1) * (0.8 - 0.1) - (0.3 - 0.1) * (0.2 - 0.1));
  CHECK(primitiveMeasure(ManifoldSpec::flatTorus(), tri) ==
        doctest::Approx(shoelace).epsilon(1e-14));

  SphereBand band{0.5, 1.2, {0, 0, 1}};
  CHECK(primitiveMeasure(ManifoldSpec::sphere(), band) ==
        doctest::Approx(kTwoPi * (std::cos(0.5) - std::cos(1.2))).epsilon(1e-14));
}

TEST_CASE("measure is additive over disjoint primitives") {
  Region two(ManifoldSpec::circle(), {CircleArc{0.0, 1.0}, CircleArc{2.0, 0.5}},
             Topology::Interior);
  CHECK(two.measure() == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("indicator honors the topology flag") {
  auto interior = halfArc(Topology::Interior);
  auto closure = halfArc(Topology::Closure);
  CHECK(interior.contains({kPi / 2, 0, 0}));
  CHECK(closure.contains({kPi / 2, 0, 0}));
  CHECK_FALSE(interior.contains({0.0, 0, 0}));  // arc endpoint
  CHECK(closure.contains({0.0, 0, 0}));
  CHECK_FALSE(interior.contains({kPi, 0, 0}));
  CHECK(closure.contains({kPi, 0, 0}));
  CHECK_FALSE(closure.contains({3 * kPi / 2, 0, 0}));

  // equator lies on the boundary of the hemisphere cap
  Point equator{1, 0, 0};
  CHECK_FALSE(hemisphere(Topology::Interior).contains(equator));
  CHECK(hemisphere(Topology::Closure).contains(equator));
}

TEST_CASE("region construction rejects bad input") {
  auto circle = ManifoldSpec::circle();
  CHECK_THROWS_AS(Region(circle, {CircleArc{0.0, 1.0}, CircleArc{0.5, 1.0}},
                         Topology::Interior),
                  RegionError);  // overlap
  CHECK_THROWS_AS(Region(circle, {CircleArc{0.0, -1.0}}, Topology::Interior), RegionError);
  CHECK_THROWS_AS(Region(ManifoldSpec::sphere(), {SphereCap{1.0, {0, 0, 2}}},
                         Topology::Interior),
                  RegionError);  // non-unit axis
  CHECK_THROWS_AS(Region(circle, {TorusRect{}}, Topology::Interior),
                  RegionError);  // wrong manifold
  CHECK_THROWS_AS(ManifoldSpec::flatTorus(-1.0, 1.0), RegionError);
}

TEST_CASE("geodesics on the three manifolds") {
  auto circle = ManifoldSpec::circle();
  auto ray = Ray::onCircle(0.0, +1);
  CHECK(geodesicAt(circle, ray, kPi)[0] == doctest::Approx(kPi).epsilon(1e-14));
  // wraps around the period
  CHECK(geodesicAt(circle, ray, 3 * kPi)[0] == doctest::Approx(kPi).epsilon(1e-12));

  auto torus = ManifoldSpec::flatTorus();
  auto tray = Ray::onTorusDir(0.25, 0.25, 1.0, 0.0);
  auto p = geodesicAt(torus, tray, 1.25);  // wraps x once
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.25).epsilon(1e-12));

  auto sphere = ManifoldSpec::sphere();
  auto sray = Ray::onSphere({1, 0, 0}, {0, 1, 0});
  auto q = geodesicAt(sphere, sray, kPi / 2);
  CHECK(q[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(q[1] == doctest::Approx(1.0).epsilon(1e-14));
  // closes after a full revolution with no trigonometric drift
  auto r = geodesicAt(sphere, sray, 100 * kTwoPi);
  CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("ray factories validate their input") {
  CHECK_THROWS_AS(Ray::onCircle(0.0, 2), RegionError);
  CHECK_THROWS_AS(Ray::onTorusDir(0, 0, 0, 0), RegionError);
  CHECK_THROWS_AS(Ray::onSphere({1, 0, 0}, {2, 0, 0}), RegionError);  // parallel
}

TEST_CASE("dwell time worked examples") {
  // circle: the arc (0, pi) holds any ray for exactly half of every period
  auto d = dwellTime(Ray::onCircle(0.0, +1), halfArc(), kTwoPi);
  CHECK(d.inside == doctest::Approx(kPi).epsilon(1e-13));
  CHECK(d.boundary == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(d.crossings >= 1);

  // equator ray rides the hemisphere boundary the whole time
  auto eq = dwellTime(Ray::onSphere({1, 0, 0}, {0, 1, 0}), hemisphere(Topology::Closure), kPi);
  CHECK(eq.inside == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(eq.boundary == doctest::Approx(kPi).epsilon(1e-13));
  CHECK(eq.grazing());
  CHECK(timeInRegion(Ray::onSphere({1, 0, 0}, {0, 1, 0}), hemisphere(Topology::Closure), kPi) ==
        doctest::Approx(kPi).epsilon(1e-13));
  CHECK(timeInRegion(Ray::onSphere({1, 0, 0}, {0, 1, 0}), hemisphere(Topology::Interior), kPi) ==
        doctest::Approx(0.0).epsilon(1e-13));

  // vertical torus ray outside the strip never enters it
  CHECK(timeInRegion(Ray::onTorus(0.7, 0.0, kPi / 2), strip(), 10.0) == 0.0);
  // vertical ray inside the strip never leaves it
  CHECK(timeInRegion(Ray::onTorus(0.3, 0.0, kPi / 2), strip(), 10.0) ==
        doctest::Approx(10.0).epsilon(1e-13));
}

TEST_CASE("dwell time errors") {
  CHECK_THROWS_AS(dwellTime(Ray::onCircle(0, 1), halfArc(), 0.0), RegionError);
  CHECK_THROWS_AS(dwellTime(Ray::onCircle(0, 1), halfArc(), -1.0), RegionError);
}

TEST_CASE("dwell matches indicator sampling on all manifolds") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  auto check = [&](const Ray& ray, const Region& region, double T) {
    auto d = dwellTime(ray, region, T);
    for (double h : {1e-3, 1e-4}) {
      double approx = riemannDwell(ray, region, T, h);
      // each enumerated crossing contributes at most one sample of error
      CHECK(std::abs(d.forTopology(region.topology()) - approx) <=
            5.0 * h * (d.crossings + 2));
    }
  };

  for (int i = 0; i < 4; ++i) {
    check(Ray::onCircle(uni(rng) * kTwoPi, i % 2 ? +1 : -1), halfArc(), 9.0);
    check(Ray::onTorus(uni(rng), uni(rng), uni(rng) * kTwoPi + 0.05), strip(), 7.0);
    double th = 0.3 + 2.0 * uni(rng), ph = kTwoPi * uni(rng), ps = kTwoPi * uni(rng);
    check(Ray::onSphereAngles(th, ph, ps), hemisphere(Topology::Interior), 8.0);
  }

  Region tris(ManifoldSpec::flatTorus(),
              {TorusTriangle{{{{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5}}}},
               TorusTriangle{{{{1.0, 1.0}, {0.5, 1.0}, {1.0, 0.5}}}}},
              Topology::Interior);
  for (int i = 0; i < 3; ++i)
    check(Ray::onTorus(uni(rng), uni(rng), uni(rng) * kTwoPi + 0.05), tris, 6.0);
}

TEST_CASE("dwell invariants: bounds, topology order, additivity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double T = 13.7;

  for (int i = 0; i < 40; ++i) {
    Ray ray = Ray::onTorus(uni(rng), uni(rng), uni(rng) * kTwoPi);
    double din = timeInRegion(ray, strip(Topology::Interior), T);
    double dcl = timeInRegion(ray, strip(Topology::Closure), T);
    CHECK(din >= 0.0);
    CHECK(dcl <= T + 1e-12);
    CHECK(din <= dcl + 1e-12);

    // additivity under advanceRay at an interior split point
    double t1 = 5.31;
    double whole = timeInRegion(ray, strip(), T);
    double split = timeInRegion(ray, strip(), t1) +
                   timeInRegion(advanceRay(ManifoldSpec::flatTorus(), ray, t1), strip(), T - t1);
    CHECK(whole == doctest::Approx(split).epsilon(5e-12));
  }

  for (int i = 0; i < 40; ++i) {
    double th = 0.2 + 2.7 * uni(rng);
    Ray ray = Ray::onSphereAngles(th, kTwoPi * uni(rng), kTwoPi * uni(rng));
    double din = timeInRegion(ray, hemisphere(Topology::Interior), T);
    double dcl = timeInRegion(ray, hemisphere(Topology::Closure), T);
    CHECK(din >= 0.0);
    CHECK(dcl <= T + 1e-12);
    CHECK(din <= dcl + 1e-12);
    double t1 = 2.17;
    double whole = timeInRegion(ray, hemisphere(Topology::Interior), T);
    double split =
        timeInRegion(ray, hemisphere(Topology::Interior), t1) +
        timeInRegion(advanceRay(ManifoldSpec::sphere(), ray, t1),
                     hemisphere(Topology::Interior), T - t1);
    CHECK(whole == doctest::Approx(split).epsilon(5e-12));
  }
}
