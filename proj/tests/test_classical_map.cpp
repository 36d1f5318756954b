#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgeo/classical_map.hpp"
#include "qgeo/errors.hpp"

#include <cmath>
#include <random>

using namespace qgeo;

namespace {

Triple randomTriple(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2 * M_PI, 0.45 * M_PI);
  return anglesToCircular(u(rng), u(rng));
}

// Largest residual over `wanted` admissible draws; draws off the real branch are skipped.
template <class F>
std::pair<double, int> maxOverAdmissible(int wanted, F&& body) {
  double worst = 0.0;
  int done = 0;
  for (int tries = 0; done < wanted && tries < 50 * wanted; ++tries) {
    try {
      worst = std::max(worst, body());
      ++done;
    } catch (const DomainError&) {
    }
  }
  return {worst, done};
}

}  // namespace

TEST_CASE("circular triple from angles") {
  const double al = 1.1, be = 0.7;
  Triple t = anglesToCircular(al, be);
  CHECK(std::abs(t.k - std::sin(be) / std::sin(al)) < 1e-15);
  CHECK(std::abs(t.a - std::sin(al + be) / std::sin(al)) < 1e-15);
  CHECK(std::abs(t.aStar - std::sin(al - be) / std::sin(al)) < 1e-15);
  // sin(al + be) sin(al - be) = sin^2 al - sin^2 be
  CHECK(t.constraintResidual() < 1e-15);
  auto [a2, b2] = circularToAngles(t);
  CHECK(std::abs(a2 - al) < 1e-14);
  CHECK(std::abs(b2 - be) < 1e-14);
  // right angles give the identity triple
  Triple r = anglesToCircular(M_PI / 2, M_PI / 2);
  CHECK(std::abs(r.k - 1.0) < 1e-15);
  CHECK(std::abs(r.a) < 1e-15);
  CHECK(std::abs(r.aStar) < 1e-15);
}

TEST_CASE("map outputs satisfy the circular constraint") {
  std::mt19937_64 rng(1);
  for (int eps : {1, -1}) {
    auto [worst, n] = maxOverAdmissible(100, [&] {
      Triple3<double> t = {randomTriple(rng), randomTriple(rng), randomTriple(rng)};
      double r = 0.0;
      for (const auto& x : mapR123(t, eps)) r = std::max(r, x.constraintResidual() / std::max(1.0, x.k * x.k));
      return r;
    });
    CHECK(n == 100);
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("identity cube is a fixed point") {
  Triple r = anglesToCircular(M_PI / 2, M_PI / 2);
  for (int eps : {1, -1}) {
    auto out = mapR123<double>({r, r, r}, eps);
    for (const auto& x : out) {
      CHECK(std::abs(x.k - 1.0) < 1e-15);
      CHECK(std::abs(x.a) < 1e-15);
    }
  }
}

TEST_CASE("local Yang-Baxter equation") {
  std::mt19937_64 rng(2);
  for (int eps : {1, -1}) {
    auto [worst, n] = maxOverAdmissible(200, [&] {
      Triple3<double> t = {randomTriple(rng), randomTriple(rng), randomTriple(rng)};
      return localYangBaxterCheck(t, mapR123(t, eps), eps);
    });
    CHECK(n == 200);
    CHECK(worst < 1e-13);
  }
  // a wrong back triple is detected
  Triple3<double> t = {anglesToCircular(1.0, 0.8), anglesToCircular(1.1, 0.9), anglesToCircular(1.3, 0.7)};
  auto r = mapR123(t, 1);
  r[0].k *= 1.01;
  CHECK(localYangBaxterCheck(t, r, 1) > 1e-4);
}

TEST_CASE("epsilon = -1 map is an involution") {
  std::mt19937_64 rng(3);
  auto [worst, n] = maxOverAdmissible(50, [&] {
    Triple3<double> t = {randomTriple(rng), randomTriple(rng), randomTriple(rng)};
    auto back = mapR123(mapR123(t, -1), -1);
    double d = 0.0;
    for (int j = 0; j < 3; ++j)
      d = std::max({d, std::abs(back[j].k - t[j].k), std::abs(back[j].a - t[j].a), std::abs(back[j].aStar - t[j].aStar)});
    return d;
  });
  CHECK(n == 50);
  CHECK(worst < 1e-11);
}

TEST_CASE("complex scalars") {
  Triple3<std::complex<double>> t;
  const CTriple base{0.8, std::complex<double>(0.4, 0.2), 0.0};
  for (auto& x : t) {
    x = base;
    x.aStar = (1.0 - x.k * x.k) / x.a;
  }
  t[1].k = std::complex<double>(0.7, -0.1);
  t[1].aStar = (1.0 - t[1].k * t[1].k) / t[1].a;
  for (int eps : {1, -1}) CHECK(localYangBaxterCheck(t, mapR123(t, eps), eps) < 1e-13);
}

TEST_CASE("negative radicand is a branch error") {
  // a2' s2' > 1 forces k2'^2 < 0
  Triple big{0.1, 3.0, (1.0 - 0.01) / 3.0};
  Triple3<double> t = {big, Triple{0.1, 3.0, 0.33}, big};
  CHECK_THROWS_AS(mapR123(t, 1), BranchError);
}

TEST_CASE("functional tetrahedron equation") {
  std::mt19937_64 rng(4);
  for (int eps : {1, -1}) {
    auto [worst, n] = maxOverAdmissible(100, [&] {
      Triple6<double> s;
      for (auto& x : s) x = randomTriple(rng);
      return functionalTetrahedronCheck(s, eps);
    });
    CHECK(n == 100);
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("FTE sides keep slots the factors do not touch") {
  Triple3<double> front = {anglesToCircular(1.0, 0.8), anglesToCircular(1.1, 0.9), anglesToCircular(1.3, 0.7)};
  Triple6<double> s = {front[0], front[1], front[2], anglesToCircular(1.2, 1.0), anglesToCircular(0.9, 0.8),
                       anglesToCircular(1.4, 1.1)};
  Triple6<double> t = s;
  applyFactor(t, 0, 1);
  for (int i : {3, 4, 5}) {
    CHECK(t[i].k == s[i].k);
    CHECK(t[i].a == s[i].a);
  }
  CHECK(maxDifference(t, s) > 1e-6);
}

TEST_CASE("Poisson structure coefficients") {
  PoissonCoefficients p = poissonCoefficients(1.0, 0.8, 1e-5);
  CHECK(std::abs(p.aaStar - 2.0) < 1e-8);
  CHECK(std::abs(p.ka - 1.0) < 1e-8);
  CHECK(std::abs(p.kaStar + 1.0) < 1e-8);
  PoissonCoefficients q = poissonCoefficients(1.3, 0.5, 1e-5);
  CHECK(std::abs(q.aaStar - 2.0) < 1e-8);
}

TEST_CASE("the angle map is symplectic") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.2 * M_PI, 0.45 * M_PI);
  int checked = 0;
  for (int eps : {1, -1}) {
    for (int tries = 0; tries < 400 && checked < 40; ++tries) {
      AngleState s;
      for (int j = 0; j < 6; ++j) s(j) = u(rng);
      try {
        if (angleChartMargin(s, eps) < 0.15) continue;
        CHECK(symplecticCheck(s, eps, 1e-5) < 1e-6);
        ++checked;
      } catch (const DomainError&) {
      }
    }
    checked = 0;
  }
  // a non-symplectic perturbation is seen
  AngleState s;
  s << 1.0, 0.8, 1.1, 0.9, 1.3, 0.7;
  AngleMap bad = [](const AngleState& x) {
    AngleState y = mapAngles(x, 1);
    y(1) *= 1.05;
    return y;
  };
  CHECK(symplecticResidual(bad, s, 1e-5) > 1e-3);
  // the canonical form is antisymmetric and non-degenerate
  auto O = canonicalOmega();
  CHECK((O + O.transpose()).norm() == 0.0);
  CHECK(std::abs(O.determinant()) > 0.5);
}

TEST_CASE("covariant evolution on a 5x5x5 box") {
  const Site extent{5, 5, 5};
  CovariantField f = makeCovariantBoundary(extent, 0.4, 7);
  covariantEvolve(f, extent);
  CovariantReport r = covariantCheck(f, extent);
  CHECK(r.cubes == 125);
  CHECK(r.kkResidual < 1e-12);
  CHECK(r.mapResidual < 1e-12);
  // same seed, same field
  CovariantField g = makeCovariantBoundary(extent, 0.4, 7);
  covariantEvolve(g, extent);
  CHECK(g.get(3, 1, {4, 4, 4}) == f.get(3, 1, {4, 4, 4}));
}

TEST_CASE("covariant check sees a corrupted component") {
  const Site extent{3, 3, 3};
  CovariantField f = makeCovariantBoundary(extent, 0.4, 3);
  covariantEvolve(f, extent);
  f.set(3, 2, {2, 1, 1}, f.get(3, 2, {2, 1, 1}) + 0.01);
  CHECK(covariantCheck(f, extent).mapResidual > 1e-4);
}
