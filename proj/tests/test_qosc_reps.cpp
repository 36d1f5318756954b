#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgeo/errors.hpp"
#include "qgeo/qosc_reps.hpp"
#include "qgeo/rmatrices.hpp"

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

using namespace qgeo;

TEST_CASE("Fock representation relations") {
  for (cplx q : {cplx(0.3), cplx(0.7), cplx(0.4, 0.3)}) {
    QOscRep r = fockRep(7, q);
    CHECK(relationResiduals(r).max() < 1e-14);
    // truncation breaks the commutator on the top state
    auto mask = r.exactMask();
    CHECK(mask.size() == 7);
    CHECK_FALSE(mask[6]);
    Eigen::MatrixXcd c = q * r.aStar * r.a - r.a * r.aStar / q;
    CHECK(std::abs(c(6, 6) - (q - 1.0 / q)) > 1e-3);
  }
  // a* raises, a lowers, k diagonal
  QOscRep r = fockRep(4, 0.5);
  CHECK(std::abs(r.aStar(2, 1) - (1.0 - std::pow(0.5, 4))) < 1e-15);
  CHECK(r.a(1, 2) == cplx(1.0));
  CHECK(std::abs(r.k(3, 3) - std::pow(0.5, 3.5)) < 1e-15);
  CHECK((r.k * r.kInv - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-14);
  CHECK_THROWS_AS(fockRep(1, 0.5), PreconditionError);
}

TEST_CASE("cyclic representation relations") {
  for (int N : {3, 5, 7}) {
    QOscRep r = cyclicRep(N, cplx(0.3, 0.8), cplx(1.2, -0.4));
    CHECK(relationResiduals(r).max() < 1e-13);
    for (bool m : r.exactMask()) CHECK(m);
    // a^N is central, a scalar
    Eigen::MatrixXcd aN = Eigen::MatrixXcd::Identity(N, N);
    for (int i = 0; i < N; ++i) aN = aN * r.a;
    cplx rhoN = std::pow(r.rho, N);
    CHECK((aN - rhoN * Eigen::MatrixXcd::Identity(N, N)).norm() < 1e-12);
  }
  CHECK_THROWS_AS(cyclicRep(3, 0.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(cyclicRep(4, 0.5, 1.0), PreconditionError);
}

TEST_CASE("local L operator blocks") {
  QOscRep r = fockRep(3, 0.4);
  LParams p{cplx(0.7, 0.1), cplx(-1.3)};
  Eigen::MatrixXcd L = localL(r, p);
  const int d = 3;
  auto blk = [&](int i, int j) { return Eigen::MatrixXcd(L.block(i * d, j * d, d, d)); };
  CHECK((blk(0, 0) - Eigen::MatrixXcd::Identity(d, d)).norm() == 0.0);
  CHECK((blk(3, 3) - p.lambda * p.mu * Eigen::MatrixXcd::Identity(d, d)).norm() < 1e-15);
  CHECK((blk(1, 1) - p.lambda * r.k).norm() < 1e-15);
  CHECK((blk(2, 2) + p.mu * r.k).norm() < 1e-15);
  CHECK((blk(1, 2) - r.aStar).norm() == 0.0);
  CHECK((blk(2, 1) - p.lambda * p.mu * r.a).norm() < 1e-15);
  // the number of up spins is conserved: no block links sectors 0, {1,2}, 3
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      int ui = (i & 1) + (i >> 1), uj = (j & 1) + (j >> 1);
      if (ui != uj) CHECK(blk(i, j).norm() == 0.0);
    }
}

TEST_CASE("oscillator operators act in their slot") {
  Eigen::MatrixXcd op(2, 2);
  op << 1.0, 2.0, 3.0, 4.0;
  Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(2, 2);
  Eigen::MatrixXcd expect = Eigen::kroneckerProduct(Eigen::kroneckerProduct(Id, op).eval(), Id);
  CHECK((Eigen::MatrixXcd(oscillatorOp(op, 1, 2)) - expect).norm() == 0.0);
  SpMat R = oscillatorOp(op, 0, 2);
  SpMat E = embedOscillator(R);
  CHECK(E.rows() == 64);
  CHECK(E.nonZeros() == 8 * R.nonZeros());
}

TEST_CASE("Fock interior mask") {
  // n1 + n2 <= 1 and n2 + n3 <= 1: (0,0,0) (1,0,0) (0,0,1) (1,0,1) (0,1,0)
  auto m = fockInteriorMask(3);
  CHECK(std::count(m.begin(), m.end(), true) == 5);
  CHECK(m[(1 * 3 + 0) * 3 + 1]);
  CHECK_FALSE(m[(1 * 3 + 1) * 3 + 0]);
}

TEST_CASE("Fock R intertwines the L operators") {
  for (double q : {0.3, 0.6}) {
    for (int M : {5, 6}) {
      std::array<QOscRep, 3> reps = {fockRep(M, q), fockRep(M, q), fockRep(M, q)};
      std::array<LParams, 3> p;
      for (auto& x : p) x = {1.0, -1.0};
      LOperators L = buildL(reps, p);
      SpMat R = fockRMatrix(M, q);
      CHECK(intertwineCheck(L, R, fockInteriorMask(M)) < 1e-10);
      // the identity does not intertwine
      SpMat Id(R.rows(), R.cols());
      Id.setIdentity();
      CHECK(intertwineCheck(L, Id, fockInteriorMask(M)) > 1e-2);
    }
  }
}

TEST_CASE("cyclic R intertwines the L operators") {
  for (int N : {3, 5}) {
    for (auto th : {std::array<double, 3>{1.4, 1.6, 1.5}, std::array<double, 3>{1.25, 1.85, 1.3}}) {
      auto tri = sphericalSidesFromAngles(th[0], th[1], th[2]);
      CyclicParams cp = cyclicParamsFromTriangle(tri, N);
      auto reps = cyclicReps(cp);
      LOperators L = buildL(reps, cp.L);
      SpMat R = cyclicRMatrix(CyclicWeightData::fromAngles(th[0], th[1], th[2], N));
      CHECK(intertwineCheck(L, R) < 1e-10);
      SpMat Id(R.rows(), R.cols());
      Id.setIdentity();
      CHECK(intertwineCheck(L, Id) > 1e-2);
    }
  }
}

TEST_CASE("parameter combinations") {
  std::array<LParams, 3> p = {LParams{2.0, 3.0}, LParams{5.0, 7.0}, LParams{11.0, 13.0}};
  auto c = parameterCombinations(p);
  CHECK(std::abs(c[0] - 5.0 / 11.0) < 1e-15);
  CHECK(std::abs(c[1] - 2.0 * 13.0) < 1e-15);
  CHECK(std::abs(c[2] - 3.0 / 7.0) < 1e-15);
  p[1].mu = 0.0;
  CHECK_THROWS_AS(parameterCombinations(p), DomainError);
}

TEST_CASE("buildL guards its inputs") {
  std::array<QOscRep, 3> reps = {fockRep(4, 0.3), fockRep(4, 0.3), fockRep(4, 0.3)};
  std::array<LParams, 3> p;
  CHECK_THROWS_AS(buildL(reps, p, 100.0), ConfigError);
  reps[2] = fockRep(5, 0.3);
  CHECK_THROWS_AS(buildL(reps, p), ConfigError);
  reps[2] = fockRep(4, 0.31);
  CHECK_THROWS_AS(buildL(reps, p), ConfigError);
}
