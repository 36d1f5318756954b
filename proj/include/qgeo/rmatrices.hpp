#pragma once

#include "qgeo/qosc_reps.hpp"
#include "qgeo/specfun.hpp"

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

namespace qgeo {

using Index3 = std::array<int, 3>;

// ---- Fock solution ------------------------------------------------------

// <n|R|n'> for the Fock representation.
cplx fockElement(const Index3& n, const Index3& np, cplx q);

// Same element in extended precision. Tetrahedron sums cancel down to
// values far below their individual terms, so they are accumulated here.
using xcplx = std::complex<long double>;
xcplx fockElementExtended(const Index3& n, const Index3& np, cplx q);

// Memoized elements with all indices <= maxIndex; larger indices are
// computed on demand. A nonzero perturbation scales every element by
// 1 + perturbation (n1 + 2 n3'), which no longer solves the equation.
class FockRMatrix {
 public:
  FockRMatrix(cplx q, int maxIndex, double perturbation = 0.0);
  cplx operator()(const Index3& n, const Index3& np) const { return cplx(extended(n, np)); }
  xcplx extended(const Index3& n, const Index3& np) const;
  cplx q() const { return q_; }

 private:
  xcplx compute(const Index3& n, const Index3& np) const;

  cplx q_;
  int side_;
  double perturbation_;
  std::vector<xcplx> table_;
};

// Matrix of R on the truncated space V^3, basis index (n1 M + n2) M + n3.
SpMat fockRMatrix(int M, cplx q);

struct TEResult {
  cplx lhs, rhs;
  double residual = 0;
  int terms = 0;  // internal summands evaluated (both sides)
};

// Relative residual with the zero-zero convention.
double relativeResidual(cplx lhs, cplx rhs, double floor = 1e-14);

// Both sides of the vertex tetrahedron equation for external input indices
// n1..n6 and output indices.
TEResult fockTECheck(const std::array<int, 6>& in, const std::array<int, 6>& out, const FockRMatrix& R);

// ---- cyclic solution ------------------------------------------------------

struct CyclicWeightData {
  int N = 0;
  std::array<FermatPoint, 4> p{};
  std::array<std::vector<cplx>, 4> phi{};  // phi_{p_j}(0..N-1)

  static CyclicWeightData fromPoints(const std::array<FermatPoint, 4>& pts);
  static CyclicWeightData fromAngles(double t1, double t2, double t3, int N);
  cplx phiAt(int j, long long n) const;
};

// Integer indices are used as given in the q-power prefactors.
cplx cyclicVertexElement(const Index3& n, const Index3& np, const CyclicWeightData& d);
SpMat cyclicRMatrix(const CyclicWeightData& d);

using Spins8 = std::array<int, 8>;  // (a, e, f, g, b, c, d, h)
cplx ircWeightCyclic(const Spins8& s, const CyclicWeightData& d);

struct TetraAngles {
  std::array<double, 6> theta{};
  std::array<Eigen::Vector3d, 4> normals{};  // outward unit normals
};

TetraAngles tetraAnglesFromNormals(const std::array<Eigen::Vector3d, 4>& normals);
TetraAngles regularTetrahedron();
// Angle triples of the four weights.
std::array<std::array<double, 3>, 4> vertexTriples(const TetraAngles& t);

// Both sides of the IRC tetrahedron equation with a Z_N sum.
using Spins14 = std::array<int, 14>;  // a1..a4, b1..b4, c1..c6
TEResult cyclicIrcTECheck(const std::array<CyclicWeightData, 4>& W, const Spins14& s);

// Vertex tetrahedron equation for the cyclic R-matrices, external indices in Z_N.
TEResult cyclicVertexTECheck(const std::array<CyclicWeightData, 4>& R, const std::array<int, 6>& in,
                             const std::array<int, 6>& out);

struct CrossFormResult {
  cplx vertex, weight, phase;
  double residual = 0;
};
// Vertex element at the indices built from corner spins against the IRC
// weight times the explicit phase q^{n1 n3 - n2'(n1 + n3) + 2 (f - a) n2'}.
CrossFormResult cyclicCrossForm(const Spins8& s, const CyclicWeightData& d);

// ---- modular solution ----------------------------------------------------

struct ModularWeight {
  ModularParam mp;
  std::array<double, 3> T{};
  std::array<double, 3> f{};
  Psi22Method method = Psi22Method::Quadrature;
};

using RealSpins8 = std::array<double, 8>;
std::array<double, 6> sigmaFromSpins(const RealSpins8& s, const std::array<double, 3>& T);
cplx ircWeightModular(const RealSpins8& s, const ModularWeight& w);

struct SpectralConstraintSet {
  std::array<std::array<double, 3>, 4> T{};
  std::array<std::array<double, 3>, 4> f{};
  double tshkiResidual() const;
  double ashkiResidual() const;
};
// Six free spectral parameters t0..t5 and eight free fields
// (f1, f2, f3, f1', f2', f3', f1'', f2'').
SpectralConstraintSet makeSpectralConstraintSet(const std::array<double, 6>& t,
                                                const std::array<double, 8>& fields = {});

struct ModularTEOptions {
  double relTol = 1e-9;
  double tailTol = 1e-8;
  double Z0 = 4.0;
};
using RealSpins14 = std::array<double, 14>;
TEResult modularIrcTECheck(const std::array<ModularWeight, 4>& W, const RealSpins14& s,
                           const ModularTEOptions& opt = {});

struct ModularVertexElement {
  double delta12 = 0;  // sigma1 + sigma2 - sigma1' - sigma2'
  double delta23 = 0;  // sigma2 + sigma3 - sigma2' - sigma3'
  cplx smooth;         // phase times 2psi2
};
ModularVertexElement modularVertexElement(const std::array<double, 6>& sigma, const ModularParam& mp,
                                          Psi22Method method = Psi22Method::Quadrature);

}  // namespace qgeo
