#pragma once

#include "qgeo/specfun.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <vector>

namespace qgeo {

using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

enum class RepKind { Fock, Cyclic };

struct QOscRep {
  RepKind kind = RepKind::Fock;
  int dim = 0;
  cplx q;
  Eigen::MatrixXcd a, aStar, k, kInv;
  int cutoff = 0;  // Fock: number of basis states
  int N = 0;       // cyclic
  cplx kappa, rho;

  // States on which the algebra relations hold exactly.
  std::vector<bool> exactMask() const;
};

// Basis |0>..|M-1>; relations exact on |0>..|M-2>.
QOscRep fockRep(int M, cplx q);
QOscRep cyclicRep(int N, cplx kappa, cplx rho);

struct RelationResiduals {
  double commutator = 0;  // q a* a - q^-1 a a* - (q - q^-1)
  double kaStar = 0;      // k a* - q a* k
  double ka = 0;          // k a - q^-1 a k
  double kSquared = 0;    // k^2 - q (1 - a* a), k^2 - q^-1 (1 - a a*)
  double max() const;
};
RelationResiduals relationResiduals(const QOscRep& rep);

struct LParams {
  cplx lambda = 1.0;
  cplx mu = 1.0;
};

// The 4x4 operator-valued L matrix; block row/column index 2 s2 + s1.
// Dense, dimension 4 * rep.dim.
Eigen::MatrixXcd localL(const QOscRep& rep, const LParams& p);

struct LOperators {
  SpMat L12, L13, L23;
  int repDim = 0;
};

// L12, L13, L23 on C^2 x C^2 x C^2 x V1 x V2 x V3 (Kronecker order, first
// factor slowest). L_ij acts on auxiliary spaces i, j and oscillator space
// 1, 2, 3 respectively.
LOperators buildL(const std::array<QOscRep, 3>& reps, const std::array<LParams, 3>& params,
                  double maxEntries = 1e7);

// Oscillator-space operator embedded as Id_8 x R.
SpMat embedOscillator(const SpMat& R);

// max |L12 L13 L23 R - R L23 L13 L12| over rows selected by rowMask
// (oscillator-space mask, repeated over the 8 auxiliary states), divided by
// the largest entry of the left side.
double intertwineCheck(const LOperators& L, const SpMat& R, const std::vector<bool>& rowMask = {});

// Oscillator mask for a truncated Fock product: n1 + n2 <= M-2, n2 + n3 <= M-2.
std::vector<bool> fockInteriorMask(int M);

std::array<cplx, 3> parameterCombinations(const std::array<LParams, 3>& p);

struct CyclicParams {
  int N = 0;
  std::array<cplx, 3> kappa{}, rho{};
  std::array<LParams, 3> L{};
};
CyclicParams cyclicParamsFromTriangle(const SphericalTriangle& tri, int N);
std::array<QOscRep, 3> cyclicReps(const CyclicParams& p);

// Operator on V1 x V2 x V3 with `op` in slot j.
SpMat oscillatorOp(const Eigen::MatrixXcd& op, int slot, int d);

}  // namespace qgeo
