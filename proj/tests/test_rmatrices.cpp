#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgeo/errors.hpp"
#include "qgeo/rmatrices.hpp"

#include <cmath>
#include <random>

using namespace qgeo;

namespace {

// Binomial times 2phi1 with q^{2 n3} replaced by a free variable x; the
// m2 > n3 elements are the limit x -> q^{2 n3} of this rational function.
cplx fockContinued(const Index3& n, const Index3& np, cplx q, cplx x) {
  const int n1 = n[0], n2 = n[1], m1 = np[0], m2 = np[1], m3 = np[2];
  const cplx qs = q * q;
  cplx binom = 1.0;
  for (int i = 1; i <= m2; ++i) binom *= (1.0 - x * std::pow(qs, i - m2)) / (1.0 - std::pow(qs, i));
  const cplx b = std::pow(qs, 1 + m3), z = std::pow(qs, 1 + n1), c = qs * std::pow(qs, -m2) * x;
  cplx sum = 0.0;
  for (int k = 0; k <= m2; ++k) {
    cplx t = std::pow(z, k);
    for (int i = 0; i < k; ++i)
      t *= (1.0 - std::pow(qs, i - m2)) * (1.0 - b * std::pow(qs, i)) / ((1.0 - c * std::pow(qs, i)) * (1.0 - std::pow(qs, i + 1)));
    sum += t;
  }
  return (n2 % 2 ? -1.0 : 1.0) * std::pow(q, (m1 - n2) * (m3 - n2)) * binom * sum;
}

std::array<CyclicWeightData, 4> weightsFor(const TetraAngles& t, int N) {
  auto tr = vertexTriples(t);
  std::array<CyclicWeightData, 4> W;
  for (int i = 0; i < 4; ++i) W[i] = CyclicWeightData::fromAngles(tr[i][0], tr[i][1], tr[i][2], N);
  return W;
}

TetraAngles sampleTetrahedron() {
  std::array<Eigen::Vector3d, 4> n = {Eigen::Vector3d(1.0, 0.9, 1.1), Eigen::Vector3d(1.1, -1.0, -0.8),
                                      Eigen::Vector3d(-0.9, 1.2, -1.0), Eigen::Vector3d(-1.0, -1.1, 0.9)};
  return tetraAnglesFromNormals(n);
}

}  // namespace

TEST_CASE("Fock elements") {
  CHECK(std::abs(fockElement({0, 0, 0}, {0, 0, 0}, 0.37) - 1.0) < 1e-15);
  CHECK(std::abs(fockElement({1, 0, 1}, {0, 1, 0}, 0.3) - 0.91) < 1e-15);
  CHECK(fockElement({0, 0, 0}, {1, 0, 0}, 0.3) == cplx(0.0));
  CHECK_THROWS_AS(fockElement({-1, 0, 0}, {0, 0, 0}, 0.3), PreconditionError);
  // extended precision agrees
  CHECK(std::abs(cplx(fockElementExtended({2, 1, 2}, {1, 2, 1}, 0.6)) - fockElement({2, 1, 2}, {1, 2, 1}, 0.6)) < 1e-14);
}

TEST_CASE("Fock elements with m2 > n3 are the continuous limit") {
  const cplx q(0.5, 0.1);
  int checked = 0;
  for (int n1 = 0; n1 < 4; ++n1)
    for (int n2 = 0; n2 < 4; ++n2)
      for (int n3 = 0; n3 < 3; ++n3)
        for (int m2 = n3 + 1; m2 <= n1 + n2 && m2 <= n2 + n3; ++m2) {
          Index3 n{n1, n2, n3}, np{n1 + n2 - m2, m2, n2 + n3 - m2};
          const cplx x = std::pow(q * q, n3);
          auto sym = [&](double h) {
            return 0.5 * (fockContinued(n, np, q, x * (1.0 + h)) + fockContinued(n, np, q, x * (1.0 - h)));
          };
          cplx lim = (4.0 * sym(5e-5) - sym(1e-4)) / 3.0;
          cplx v = fockElement(n, np, q);
          CHECK(std::abs(v - lim) < 1e-8 * std::max(1.0, std::abs(v)));
          ++checked;
        }
  CHECK(checked > 10);
  // (0,2,0 | 1,1,1) at q = 0.5: q (q^4 - 1) / (1 - q^2)
  CHECK(std::abs(fockElement({0, 2, 0}, {1, 1, 1}, 0.5) + 0.625) < 1e-15);
}

TEST_CASE("charge sectors") {
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int x = 0; x < 3; ++x)
          for (int y = 0; y < 3; ++y)
            for (int z = 0; z < 3; ++z) {
              bool ok = a + b == x + y && b + c == y + z;
              if (!ok) CHECK(fockElement({a, b, c}, {x, y, z}, 0.4) == cplx(0.0));
            }
  auto d = CyclicWeightData::fromAngles(1.4, 1.6, 1.5, 3);
  CHECK(cyclicVertexElement({1, 0, 0}, {0, 0, 0}, d) == cplx(0.0));
  CHECK(cyclicVertexElement({1, 2, 0}, {0, 0, 2}, d) != cplx(0.0));
}

TEST_CASE("Fock tetrahedron equation") {
  FockRMatrix R(0.3, 2);
  TEResult z = fockTECheck({0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0}, R);
  CHECK(z.residual < 1e-14);
  CHECK(std::abs(z.lhs - 1.0) < 1e-14);
  // both sides vanish on a charge mismatch
  TEResult m = fockTECheck({1, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0}, R);
  CHECK(m.residual == 0.0);
  CHECK(std::abs(m.lhs) < 1e-14);
  // every tuple with indices <= 1
  FockRMatrix R5(0.5, 1);
  double worst = 0.0;
  for (int in = 0; in < 64; ++in)
    for (int out = 0; out < 64; ++out) {
      std::array<int, 6> a, b;
      for (int j = 0; j < 6; ++j) {
        a[j] = (in >> j) & 1;
        b[j] = (out >> j) & 1;
      }
      worst = std::max(worst, fockTECheck(a, b, R5).residual);
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("a perturbed Fock R fails the tetrahedron equation") {
  FockRMatrix bad(0.5, 1, 1e-2);
  double worst = 0.0;
  for (int in = 0; in < 64; ++in)
    for (int out = 0; out < 64; ++out) {
      std::array<int, 6> a, b;
      for (int j = 0; j < 6; ++j) {
        a[j] = (in >> j) & 1;
        b[j] = (out >> j) & 1;
      }
      worst = std::max(worst, fockTECheck(a, b, bad).residual);
    }
  CHECK(worst > 1e-3);
}

TEST_CASE("tetrahedron angles from plane normals") {
  TetraAngles reg = regularTetrahedron();
  for (double th : reg.theta) CHECK(std::abs(th - std::acos(1.0 / 3.0)) < 1e-14);
  TetraAngles t = sampleTetrahedron();
  const int pairs[6][2] = {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3}};
  for (int k = 0; k < 6; ++k) {
    CHECK(t.theta[k] > 0.0);
    CHECK(t.theta[k] < M_PI);
    CHECK(std::abs(std::cos(t.theta[k]) + t.normals[pairs[k][0]].dot(t.normals[pairs[k][1]])) < 1e-12);
  }
  // parallel or zero normals do not bound a tetrahedron
  Eigen::Vector3d v(1, 1, 1);
  std::array<Eigen::Vector3d, 4> par = {v, v, Eigen::Vector3d(1, -1, 0), Eigen::Vector3d(0, 0, 1)};
  CHECK_THROWS_AS(tetraAnglesFromNormals(par), DegeneracyError);
  std::array<Eigen::Vector3d, 4> zero = {Eigen::Vector3d::Zero(), v, Eigen::Vector3d(1, -1, 0), Eigen::Vector3d(0, 0, 1)};
  CHECK_THROWS_AS(tetraAnglesFromNormals(zero), DegeneracyError);
}

TEST_CASE("cyclic vertex elements") {
  auto d = CyclicWeightData::fromAngles(1.4, 1.6, 1.5, 2);
  // direct sum with fermatPhi rather than the cached table
  cplx direct = 0.0;
  for (int k = 0; k < 2; ++k)
    direct += fermatPhi(d.p[0], k) * fermatPhi(d.p[1], k) / (fermatPhi(d.p[2], k) * fermatPhi(d.p[3], k));
  CHECK(std::abs(cyclicVertexElement({0, 0, 0}, {0, 0, 0}, d) - direct) < 1e-14 * std::abs(direct));
  auto d3 = CyclicWeightData::fromAngles(1.3, 1.7, 1.5, 3);
  for (int m2 = 0; m2 < 3; ++m2) {
    Index3 n{1, 2, 0}, np{(3 + 3 - m2) % 3, m2, (2 - m2 + 3) % 3};
    cplx v = cyclicVertexElement(n, np, d3);
    cplx w = cyclicVertexElement(n, {np[0] - 3, m2 + 3, np[2]}, d3);
    CHECK(std::abs(v - w) < 1e-13 * std::abs(v));
  }
}

TEST_CASE("cyclic IRC weights") {
  auto d = CyclicWeightData::fromAngles(1.3, 1.7, 1.5, 3);
  cplx expect = 0.0;
  for (int n = 0; n < 3; ++n) expect += d.phi[0][n] * d.phi[1][n] / (d.phi[2][n] * d.phi[3][n]);
  CHECK(std::abs(ircWeightCyclic({2, 2, 2, 2, 2, 2, 2, 2}, d) - expect) < 1e-13 * std::abs(expect));
  Spins8 s{0, 1, 2, 1, 0, 2, 2, 1};
  Spins8 t = s;
  for (auto& x : t) x += 2;
  CHECK(std::abs(ircWeightCyclic(s, d) - ircWeightCyclic(t, d)) < 1e-13 * std::abs(ircWeightCyclic(s, d)));
}

TEST_CASE("IRC weight against the vertex element") {
  for (int N : {2, 3, 4}) {
    auto d = CyclicWeightData::fromAngles(1.35, 1.65, 1.45, N);
    double worst = 0.0;
    std::mt19937_64 rng(N);
    std::uniform_int_distribution<int> u(0, N - 1);
    for (int i = 0; i < 40; ++i) {
      Spins8 s;
      for (auto& x : s) x = u(rng);
      worst = std::max(worst, cyclicCrossForm(s, d).residual);
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("cyclic IRC tetrahedron equation") {
  TetraAngles t = sampleTetrahedron();
  for (int N : {2, 3, 4}) {
    auto W = weightsFor(t, N);
    std::mt19937_64 rng(10 + N);
    std::uniform_int_distribution<int> u(0, N - 1);
    double worst = 0.0;
    for (int i = 0; i < 60; ++i) {
      Spins14 s;
      for (auto& x : s) x = u(rng);
      worst = std::max(worst, cyclicIrcTECheck(W, s).residual);
    }
    CHECK(worst < 1e-9);
  }
  // swapping two dihedral angles breaks it
  TetraAngles p = t;
  std::swap(p.theta[0], p.theta[5]);
  auto W = weightsFor(p, 3);
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> u(0, 2);
  double worst = 0.0;
  for (int i = 0; i < 60; ++i) {
    Spins14 s;
    for (auto& x : s) x = u(rng);
    worst = std::max(worst, cyclicIrcTECheck(W, s).residual);
  }
  CHECK(worst > 1e-2);
}

TEST_CASE("cyclic vertex tetrahedron equation for odd N") {
  auto W = weightsFor(sampleTetrahedron(), 3);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> u(0, 2);
  double worst = 0.0;
  int nonzero = 0;
  for (int i = 0; i < 10; ++i) {
    std::array<int, 6> a, b;
    for (auto& x : a) x = u(rng);
    for (int out = 0; out < 729; ++out) {
      for (int j = 0, o = out; j < 6; ++j, o /= 3) b[j] = o % 3;
      TEResult r = cyclicVertexTECheck(W, a, b);
      if (std::abs(r.lhs) > 1e-12) ++nonzero;
      worst = std::max(worst, r.residual);
    }
  }
  CHECK(nonzero > 100);
  CHECK(worst < 1e-9);
}

TEST_CASE("spectral parameter constraints") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  std::array<double, 6> t;
  std::array<double, 8> f;
  for (auto& x : t) x = u(rng);
  for (auto& x : f) x = u(rng);
  SpectralConstraintSet c = makeSpectralConstraintSet(t, f);
  CHECK(c.tshkiResidual() == 0.0);
  CHECK(c.ashkiResidual() < 1e-16);
  c.T[2][0] += 0.1;
  CHECK(c.tshkiResidual() > 0.05);
}

TEST_CASE("modular weight and vertex element") {
  ModularWeight w;
  w.mp = ModularParam::fromPolar(0.8, M_PI / 40);
  w.T = {0.1, -0.05, 0.2};
  RealSpins8 s{0.1, -0.2, 0.3, 0.0, 0.15, -0.1, 0.05, 0.2};
  auto sg = sigmaFromSpins(s, w.T);
  // the two delta constraints hold identically on the spin parametrization
  ModularVertexElement e = modularVertexElement(sg, w.mp);
  CHECK(std::abs(e.delta12) < 1e-15);
  CHECK(std::abs(e.delta23) < 1e-15);
  cplx bare = ircWeightModular(s, w);
  CHECK(std::abs(bare - e.smooth) < 1e-14 * std::abs(bare));
  // fields multiply by exp(sum f_j (sigma_j + sigma_j'))
  ModularWeight wf = w;
  wf.f = {0.05, -0.03, 0.02};
  double field = 0.0;
  for (int j = 0; j < 3; ++j) field += wf.f[j] * (sg[j] + sg[j + 3]);
  CHECK(std::abs(ircWeightModular(s, wf) - std::exp(field) * bare) < 1e-13 * std::abs(bare));
  // only spin differences enter
  RealSpins8 shifted = s;
  for (auto& x : shifted) x += 0.37;
  CHECK(std::abs(ircWeightModular(shifted, w) - bare) < 1e-10 * std::abs(bare));
}

TEST_CASE("modular weight by quadrature and by residues") {
  ModularWeight q, r;
  q.mp = r.mp = ModularParam::fromPolar(0.8, M_PI / 40);
  r.method = Psi22Method::ResidueSeries;
  RealSpins8 zero{};
  cplx a = ircWeightModular(zero, q), b = ircWeightModular(zero, r);
  CHECK(std::abs(a - b) < 1e-5 * std::abs(a));
}
