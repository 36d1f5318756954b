#pragma once

#include <array>
#include <complex>
#include <vector>

namespace qgeo {

using cplx = std::complex<double>;

// ---- q-series -------------------------------------------------------------

// (x; qsq)_n = prod_{j<n} (1 - qsq^j x)
cplx qPochhammer(cplx x, cplx qsq, int n);

// Gaussian binomial in base qsq; zero for k > n.
cplx qBinomial(int n, int k, cplx qsq);

// 2phi1(a, b; c; qsq, z). Terminates when a factor (1 - a qsq^n) vanishes,
// otherwise needs |z| < 1 and |qsq| < 1.
cplx qGauss2phi1(cplx a, cplx b, cplx c, cplx qsq, cplx z);

// Terminating variant with a = qsq^{-m} handled exactly.
cplx qGauss2phi1Terminating(int m, cplx b, cplx c, cplx qsq, cplx z);

// ---- non-compact quantum dilogarithm --------------------------------------

struct ModularParam {
  cplx b;
  cplx q;       // exp(i pi b^2)
  cplx qTilde;  // exp(-i pi / b^2)
  cplx eta;     // (b + 1/b) / 2
  cplx logPhi0; // log phi(0), cached for the reflection formula

  static ModularParam fromB(cplx b);
  static ModularParam fromPolar(double modulus, double argument);

  bool seriesAdmissible() const { return std::imag(b * b) > 0.0; }
  double etaDrift() const;
};

enum class DilogMethod { Quadrature, ProductSeries };
enum class Psi22Method { Quadrature, ResidueSeries };

cplx quantumDilog(cplx z, const ModularParam& mp,
                  DilogMethod method = DilogMethod::ProductSeries);
// log phi(z), branch unspecified; only exp() of the result is meaningful.
cplx logQuantumDilog(cplx z, const ModularParam& mp);

// Res_{z = i eta} phi(z)
cplx quantumDilogResidue(const ModularParam& mp);

cplx psi22(cplx c1, cplx c2, cplx c3, cplx c4, cplx c0, const ModularParam& mp,
           Psi22Method method = Psi22Method::Quadrature);

// ---- roots of unity and the Fermat-curve dilogarithm ----------------------

// q^k for q = -exp(i pi / N), reduced exactly mod 2N.
cplx rootPower(int N, long long k);

struct FermatPoint {
  cplx x;
  cplx y;
  int N = 2;
  double curveResidual() const;
};

// phi_p(n) for n taken mod N.
cplx fermatPhi(const FermatPoint& p, long long n);

// phi_p(0..N-1), for repeated lookups.
std::vector<cplx> fermatPhiTable(const FermatPoint& p);

struct SphericalTriangle {
  std::array<double, 3> theta{};
  std::array<double, 3> a{};
  std::array<double, 4> beta{};
};

SphericalTriangle sphericalSidesFromAngles(double theta1, double theta2, double theta3);

std::array<FermatPoint, 4> fermatPointsFromTriangle(const SphericalTriangle& tri, int N);

}  // namespace qgeo
