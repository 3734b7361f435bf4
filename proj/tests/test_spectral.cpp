#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "obswave/spectral.hpp"

using namespace obswave;

namespace {

// Gauss-Legendre rule on [-1,1], computed here independently of the library.
void gauss(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double p0 = 1, p1 = t;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (t * p1 - p0) / (t * t - 1);
    x[i] = t;
    w[i] = 2.0 / ((1 - t * t) * dp * dp);
  }
}

// L2 inner product of two modes over the whole manifold, by quadrature that is
// exact (to rounding) for the trigonometric/harmonic polynomials involved.
double innerProduct(const SpectralBasis& basis, const EigenMode& a, const EigenMode& b) {
  const auto& m = basis.manifold();
  if (m.kind == ManifoldKind::Circle) {
    int n = 512;  // trapezoid on a periodic integrand: spectrally exact
    double acc = 0, h = kTwoPi / n;
    for (int i = 0; i < n; ++i) {
      Point p{i * h, 0, 0};
      acc += evalMode(m, a, p) * evalMode(m, b, p);
    }
    return acc * h;
  }
  if (m.kind == ManifoldKind::FlatTorus2) {
    int n = 128;
    double acc = 0, h1 = m.periods[0] / n, h2 = m.periods[1] / n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Point p{i * h1, j * h2, 0};
        acc += evalMode(m, a, p) * evalMode(m, b, p);
      }
    return acc * h1 * h2;
  }
  std::vector<double> gx, gw;
  gauss(48, gx, gw);
  int nphi = 96;
  double acc = 0;
  for (size_t i = 0; i < gx.size(); ++i) {
    double st = std::sqrt(1 - gx[i] * gx[i]);
    for (int j = 0; j < nphi; ++j) {
      double phi = kTwoPi * j / nphi;
      Point p{st * std::cos(phi), st * std::sin(phi), gx[i]};
      acc += gw[i] * evalMode(m, a, p) * evalMode(m, b, p);
    }
  }
  return acc * kTwoPi / nphi;
}

}  // namespace

TEST_CASE("mode counts on the circle") {
  auto basis = SpectralBasis::build(ManifoldSpec::circle(), 3.0);
  REQUIRE(basis.size() == 6);
  std::vector<double> expect{1, 1, 2, 2, 3, 3};
  for (int i = 0; i < 6; ++i) {
    CHECK(basis.modes()[i].lambda == doctest::Approx(expect[i]));
    CHECK(basis.modes()[i].index == i + 1);
  }
  REQUIRE(basis.eigenspaces().size() == 3);
  for (const auto& s : basis.eigenspaces()) CHECK(s.size() == 2);
  CHECK(basis.minGap() == doctest::Approx(1.0));
}

TEST_CASE("mode counts on sphere and torus") {
  // only the l = 1 triple lies at or below sqrt(2) + eps
  auto s1 = SpectralBasis::build(ManifoldSpec::sphere(), std::sqrt(2.0) + 1e-9);
  CHECK(s1.size() == 3);
  CHECK(s1.eigenspaces().size() == 1);
  CHECK(s1.eigenspaces()[0].size() == 3);

  // degrees l <= 8: sum of (2l+1)
  auto s8 = SpectralBasis::build(ManifoldSpec::sphere(), 8.5);
  int expect = 0;
  for (int l = 1; l <= 8; ++l) expect += 2 * l + 1;
  CHECK(s8.size() == expect);

  // unit torus: lattice vectors with |k| <= 1 give 2 + 2 modes at 2*pi
  auto t1 = SpectralBasis::build(ManifoldSpec::flatTorus(), kTwoPi + 1e-9);
  CHECK(t1.size() == 4);
  CHECK(t1.eigenspaces().size() == 1);  // a single eigenspace of dimension 4
}

TEST_CASE("torus mode count against a direct lattice enumeration") {
  double lambdaMax = 20.0;
  auto basis = SpectralBasis::build(ManifoldSpec::flatTorus(), lambdaMax);
  int count = 0;
  int kmax = (int)(lambdaMax / kTwoPi) + 1;
  for (int k1 = 0; k1 <= kmax; ++k1)
    for (int k2 = 0; k2 <= kmax; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      if (kTwoPi * std::hypot((double)k1, (double)k2) > lambdaMax) continue;
      count += (k1 > 0 ? 2 : 1) * (k2 > 0 ? 2 : 1);  // cos/sin per nonzero axis
    }
  CHECK(basis.size() == count);
}

TEST_CASE("spectrum is sorted and eigenspaces tile the basis") {
  for (auto m : {ManifoldSpec::circle(), ManifoldSpec::flatTorus(), ManifoldSpec::sphere()}) {
    auto basis = SpectralBasis::build(m, 12.0);
    for (int i = 1; i < basis.size(); ++i)
      CHECK(basis.modes()[i].lambda >= basis.modes()[i - 1].lambda - 1e-12);
    int cursor = 0;
    for (const auto& s : basis.eigenspaces()) {
      CHECK(s.first == cursor);
      CHECK(s.last > s.first);
      for (int i = s.first; i < s.last; ++i)
        CHECK(basis.modes()[i].lambda == doctest::Approx(s.lambda).epsilon(1e-12));
      cursor = s.last;
    }
    CHECK(cursor == basis.size());
  }
}

TEST_CASE("cutoff below the first frequency is an error") {
  CHECK_THROWS_AS(SpectralBasis::build(ManifoldSpec::circle(), 0.5), SpectralError);
}

TEST_CASE("alignDown never splits an eigenspace") {
  auto basis = SpectralBasis::build(ManifoldSpec::circle(), 3.0);
  CHECK(basis.alignDown(3) == 2);
  CHECK(basis.alignDown(4) == 4);
  CHECK(basis.alignDown(6) == 6);
  CHECK(basis.alignDown(99) == 6);

  auto sphere = SpectralBasis::build(ManifoldSpec::sphere(), 4.0);  // sizes 3, 5, 7
  CHECK(sphere.alignDown(4) == 3);
  CHECK(sphere.alignDown(8) == 8);
  CHECK(sphere.alignDown(14) == 8);
}

TEST_CASE("modes are orthonormal over the manifold") {
  for (auto m : {ManifoldSpec::circle(), ManifoldSpec::flatTorus(), ManifoldSpec::sphere()}) {
    auto basis = SpectralBasis::build(m, m.kind == ManifoldKind::FlatTorus2 ? 10.0 : 3.5);
    for (int i = 0; i < basis.size(); ++i)
      for (int j = i; j < basis.size(); ++j) {
        double ip = innerProduct(basis, basis.modes()[i], basis.modes()[j]);
        CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
      }
  }
}

TEST_CASE("pointwise mode values") {
  auto circle = ManifoldSpec::circle();
  auto cb = SpectralBasis::build(circle, 1.5);
  // first mode is sin(x)/sqrt(pi)
  CHECK(evalMode(circle, cb.modes()[0], {kPi / 2, 0, 0}) ==
        doctest::Approx(std::sqrt(1.0 / kPi)).epsilon(1e-14));

  auto sphere = ManifoldSpec::sphere();
  auto sb = SpectralBasis::build(sphere, 1.5);
  // Y_{1,0} at the north pole: sqrt(3 / 4pi)
  for (const auto& mode : sb.modes()) {
    const auto& d = std::get<SphereModeDesc>(mode.desc);
    if (d.l == 1 && d.m == 0)
      CHECK(evalMode(sphere, mode, {0, 0, 1}) ==
            doctest::Approx(std::sqrt(3.0 / (4 * kPi))).epsilon(1e-13));
  }
}

TEST_CASE("sphere modes satisfy the eigenfunction relation") {
  auto sphere = ManifoldSpec::sphere();
  auto basis = SpectralBasis::build(sphere, std::sqrt(10.0 * 11.0) + 1e-9);  // l <= 10
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double h = 1e-3;

  auto at = [&](const EigenMode& mode, double th, double ph) {
    Point p{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
    return evalMode(sphere, mode, p);
  };

  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& mode = basis.modes()[(size_t)(uni(rng) * basis.size())];
    double th = 0.4 + 2.3 * uni(rng);  // stay away from the poles
    double ph = kTwoPi * uni(rng);
    // 4th-order central stencils for the angular Laplacian
    double f[5], g[5];
    for (int s = -2; s <= 2; ++s) {
      f[s + 2] = at(mode, th + s * h, ph);
      g[s + 2] = at(mode, th, ph + s * h);
    }
    double fth = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h);
    double fthth = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h);
    double fphph = (-g[0] + 16 * g[1] - 30 * g[2] + 16 * g[3] - g[4]) / (12 * h * h);
    double lap = fthth + fth / std::tan(th) + fphph / (std::sin(th) * std::sin(th));
    double lambda2 = mode.lambda * mode.lambda;
    CHECK(-lap == doctest::Approx(lambda2 * f[2]).epsilon(2e-7));
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("mass matrix worked examples") {
  auto circle = ManifoldSpec::circle();
  auto basis = SpectralBasis::build(circle, 8.0);
  Region half(circle, {CircleArc{0.0, kPi}}, Topology::Interior);

  auto mass = massMatrix(basis, half, 0, 2);  // the j = 1 eigenspace
  CHECK(mass.provenance == "analytic");
  CHECK(mass.m(0, 0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(mass.m(1, 1) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(std::abs(mass.m(0, 1)) < 1e-13);

  // full manifold: identity
  Region full(circle, {CircleArc{0.0, kTwoPi}}, Topology::Interior);
  auto id = massMatrix(basis, full, 0, basis.size());
  CHECK((id.m - Eigen::MatrixXd::Identity(basis.size(), basis.size())).cwiseAbs().maxCoeff() <
        1e-9);

  // hemisphere: the Y_{1,0} diagonal entry is exactly 1/2
  auto sphere = ManifoldSpec::sphere();
  auto sb = SpectralBasis::build(sphere, 2.5);
  Region hemi(sphere, {SphereCap{kPi / 2, {0, 0, 1}}}, Topology::Interior);
  auto sm = massMatrix(sb, hemi, 0, sb.size());
  for (int i = 0; i < sb.size(); ++i) {
    const auto& d = std::get<SphereModeDesc>(sb.modes()[i].desc);
    if (d.l == 1 && d.m == 0) CHECK(sm.m(i, i) == doctest::Approx(0.5).epsilon(1e-8));
  }
}

TEST_CASE("mass matrices are symmetric with spectrum in [0, 1]") {
  auto torus = ManifoldSpec::flatTorus();
  auto basis = SpectralBasis::build(torus, 10.0);
  Region tri(torus, {TorusTriangle{{{{0.05, 0.1}, {0.8, 0.2}, {0.3, 0.9}}}}},
             Topology::Interior);
  auto mass = massMatrix(basis, tri, 0, basis.size());
  CHECK((mass.m - mass.m.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mass.m, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues()(0) >= -1e-9);
  CHECK(es.eigenvalues()(basis.size() - 1) <= 1.0 + 1e-9);
  CHECK(mass.m.trace() > 0.0);
}

TEST_CASE("mass matrix is monotone in the region") {
  auto circle = ManifoldSpec::circle();
  auto basis = SpectralBasis::build(circle, 6.0);
  Region small(circle, {CircleArc{0.0, 1.0}}, Topology::Interior);
  Region large(circle, {CircleArc{0.0, 2.0}}, Topology::Interior);
  auto a = massMatrix(basis, small, 0, basis.size());
  auto b = massMatrix(basis, large, 0, basis.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.m - a.m, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues()(0) >= -1e-9);

  auto sphere = ManifoldSpec::sphere();
  auto sb = SpectralBasis::build(sphere, 4.0);
  Region c1(sphere, {SphereCap{0.5, {0, 0, 1}}}, Topology::Interior);
  Region c2(sphere, {SphereCap{1.0, {0, 0, 1}}}, Topology::Interior);
  auto ma = massMatrix(sb, c1, 0, sb.size());
  auto mb = massMatrix(sb, c2, 0, sb.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ses(mb.m - ma.m, Eigen::EigenvaluesOnly);
  CHECK(ses.eigenvalues()(0) >= -1e-9);
}

TEST_CASE("sphere cap mass against an associated-Legendre oracle") {
  // For a cap around the z axis the azimuth integral is diagonal in (m, type),
  // so entries reduce to 1D integrals of normalized associated Legendre
  // functions, evaluated here with std::assoc_legendre.
  auto sphere = ManifoldSpec::sphere();
  auto basis = SpectralBasis::build(sphere, 5.0);  // l <= 4
  double theta0 = 1.1;
  Region cap(sphere, {SphereCap{theta0, {0, 0, 1}}}, Topology::Interior);
  auto mass = massMatrix(basis, cap, 0, basis.size());
  CHECK(mass.provenance.rfind("quadrature", 0) == 0);

  std::vector<double> gx, gw;
  gauss(40, gx, gw);
  auto nlm = [](int l, int m) {
    double f = (2.0 * l + 1.0) / 2.0;
    for (int t = l - m + 1; t <= l + m; ++t) f /= t;
    return std::sqrt(f);
  };
  double u0 = std::cos(theta0);
  for (int i = 0; i < basis.size(); ++i)
    for (int j = i; j < basis.size(); ++j) {
      const auto& a = std::get<SphereModeDesc>(basis.modes()[i].desc);
      const auto& b = std::get<SphereModeDesc>(basis.modes()[j].desc);
      double expect = 0.0;
      if (a.m == b.m) {  // same order and same cos/sin type
        int m = std::abs(a.m);
        double acc = 0;
        for (size_t q = 0; q < gx.size(); ++q) {
          double u = u0 + (1 - u0) * (gx[q] + 1) / 2;
          acc += gw[q] * std::assoc_legendre((unsigned)a.l, (unsigned)m, u) *
                 std::assoc_legendre((unsigned)b.l, (unsigned)m, u);
        }
        expect = nlm(a.l, m) * nlm(b.l, m) * acc * (1 - u0) / 2;
      }
      CHECK(mass.m(i, j) == doctest::Approx(expect).epsilon(1e-8));
    }
}

TEST_CASE("explicit quadrature orders agree with the automatic choice") {
  auto sphere = ManifoldSpec::sphere();
  auto basis = SpectralBasis::build(sphere, 3.5);
  Region band(sphere, {SphereBand{0.4, 1.3, {0, 1, 0}}}, Topology::Interior);
  auto autoMass = massMatrix(basis, band, 0, basis.size());
  auto fixedMass = massMatrix(basis, band, 0, basis.size(), QuadratureSpec{48, 96});
  CHECK((autoMass.m - fixedMass.m).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("eigenspaceBlock extracts the diagonal block") {
  auto circle = ManifoldSpec::circle();
  auto basis = SpectralBasis::build(circle, 3.0);
  Region half(circle, {CircleArc{0.0, kPi}}, Topology::Interior);
  auto mass = massMatrix(basis, half, 0, basis.size());
  auto block = eigenspaceBlock(mass, basis.eigenspaces()[1]);
  CHECK(block.rows() == 2);
  CHECK(block(0, 0) == mass.m(2, 2));
  CHECK(block(1, 0) == mass.m(3, 2));
}

TEST_CASE("describeMode names are human readable") {
  auto cb = SpectralBasis::build(ManifoldSpec::circle(), 1.5);
  CHECK(describeMode(cb.modes()[0]).find("sin") != std::string::npos);
  auto sb = SpectralBasis::build(ManifoldSpec::sphere(), 1.5);
  CHECK(describeMode(sb.modes()[0]).find("l=1") != std::string::npos);
}
