#pragma once

#include "qgeo/errors.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <string>
#include <type_traits>
#include <vector>

namespace qgeo {

template <typename T> struct is_complex : std::false_type {};
template <typename T> struct is_complex<std::complex<T>> : std::true_type {};

template <typename Scalar>
struct CircularTriple {
  Scalar k;
  Scalar a;
  Scalar aStar;

  double constraintResidual() const { return std::abs(a * aStar - (Scalar(1) - k * k)); }
};

using Triple = CircularTriple<double>;
using CTriple = CircularTriple<std::complex<double>>;

template <typename Scalar> using Triple3 = std::array<CircularTriple<Scalar>, 3>;
template <typename Scalar> using Triple6 = std::array<CircularTriple<Scalar>, 6>;

Triple anglesToCircular(double alpha, double beta);
// (alpha, beta) from cos alpha = (a - a*)/2k, cos beta = (a + a*)/2
std::pair<double, double> circularToAngles(const Triple& t);

struct FaceAngles;  // geometry.hpp

struct EdgeLengths {
  double lp, lq, lpPrime, lqPrime;
};

// The 2x2 matrix [[A, B], [C, D]] mapping (lp, lq) to (lp', lq').
Eigen::Matrix2d edgeMatrix(const FaceAngles& f);
std::pair<double, double> edgePropagate(double lp, double lq, const FaceAngles& f);
// |(AD - BC)(AB - CD) - (DB - AC)|
double edgeConstraintResidual(const Eigen::Matrix2d& X);

// X_eps = [[k, a*], [-eps a, eps k]]
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> circularEdgeMatrix(const CircularTriple<Scalar>& t, int eps) {
  Eigen::Matrix<Scalar, 2, 2> X;
  X << t.k, t.aStar, Scalar(-eps) * t.a, Scalar(eps) * t.k;
  return X;
}

// Embed a 2x2 block into rows/cols (i, j) of the 3x3 identity.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> embed3(const Eigen::Matrix<Scalar, 2, 2>& X, int i, int j) {
  Eigen::Matrix<Scalar, 3, 3> M = Eigen::Matrix<Scalar, 3, 3>::Identity();
  M(i, i) = X(0, 0);
  M(i, j) = X(0, 1);
  M(j, i) = X(1, 0);
  M(j, j) = X(1, 1);
  return M;
}

namespace detail {

template <typename Scalar>
Scalar principalSqrt(Scalar x) {
  if constexpr (is_complex<Scalar>::value) {
    return std::sqrt(x);
  } else {
    if (x < 0) throw BranchError("negative radicand for k2'");
    return std::sqrt(x);
  }
}

}  // namespace detail

template <typename Scalar>
Triple3<Scalar> mapR123(const Triple3<Scalar>& t, int eps) {
  const auto& [k1, a1, s1] = t[0];
  const auto& [k2, a2, s2] = t[1];
  const auto& [k3, a3, s3] = t[2];
  if (std::abs(k2) == 0.0) throw SingularityError("map needs k2 != 0");
  const Scalar e(eps);
  Scalar s2p = s1 * s3 + e * k1 * k3 * s2;
  Scalar a2p = a1 * a3 + e * k1 * k3 * a2;
  Scalar k2p = detail::principalSqrt(Scalar(1) - a2p * s2p);
  if (std::abs(k2p) < 1e-300) throw SingularityError("map produced k2' = 0");
  Triple3<Scalar> out;
  out[0] = {k1 * k2 / k2p, (k3 * a1 - e * k1 * a2 * s3) / k2p, (k3 * s1 - e * k1 * s2 * a3) / k2p};
  out[1] = {k2p, a2p, s2p};
  out[2] = {k3 * k2 / k2p, (k1 * a3 - e * k3 * s1 * a2) / k2p, (k1 * s3 - e * k3 * a1 * s2) / k2p};
  return out;
}

// Residual relative to the product of the factors' infinity norms, the scale
// of rounding error in either triple product.
template <typename Scalar>
double localYangBaxterCheck(const Triple3<Scalar>& front, const Triple3<Scalar>& back, int eps) {
  using M3 = Eigen::Matrix<Scalar, 3, 3>;
  const M3 f0 = embed3(circularEdgeMatrix(front[0], eps), 0, 1), f1 = embed3(circularEdgeMatrix(front[1], eps), 0, 2),
           f2 = embed3(circularEdgeMatrix(front[2], eps), 1, 2);
  const M3 b2 = embed3(circularEdgeMatrix(back[2], eps), 1, 2), b1 = embed3(circularEdgeMatrix(back[1], eps), 0, 2),
           b0 = embed3(circularEdgeMatrix(back[0], eps), 0, 1);
  M3 L = f0 * f1 * f2;
  M3 R = b2 * b1 * b0;
  auto norm = [](const M3& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); };
  const double scale = std::max(norm(f0) * norm(f1) * norm(f2), norm(b2) * norm(b1) * norm(b0));
  return (L - R).cwiseAbs().maxCoeff() / scale;
}

// Factor positions of R_123, R_145, R_246, R_356 in the six-slot state.
inline constexpr std::array<std::array<int, 3>, 4> kFteSlots = {
    {{0, 1, 2}, {0, 3, 4}, {1, 3, 5}, {2, 4, 5}}};

template <typename Scalar>
void applyFactor(Triple6<Scalar>& s, int factor, int eps) {
  const auto& idx = kFteSlots[factor];
  auto r = mapR123<Scalar>({s[idx[0]], s[idx[1]], s[idx[2]]}, eps);
  for (int i = 0; i < 3; ++i) s[idx[i]] = r[i];
}

template <typename Scalar>
double maxDifference(const Triple6<Scalar>& x, const Triple6<Scalar>& y) {
  double d = 0.0;
  for (int i = 0; i < 6; ++i)
    d = std::max({d, std::abs(x[i].k - y[i].k), std::abs(x[i].a - y[i].a),
                  std::abs(x[i].aStar - y[i].aStar)});
  return d;
}

// Left side applies R123, R145, R246, R356 in that order, right side the reverse.
template <typename Scalar>
std::pair<Triple6<Scalar>, Triple6<Scalar>> functionalTetrahedronSides(const Triple6<Scalar>& s,
                                                                       int eps) {
  Triple6<Scalar> l = s, r = s;
  for (int f : {0, 1, 2, 3}) {
    try {
      applyFactor(l, f, eps);
    } catch (const DomainError& e) {
      throw DomainError(std::string("left side, factor ") + std::to_string(f) + ": " + e.what());
    }
  }
  for (int f : {3, 2, 1, 0}) {
    try {
      applyFactor(r, f, eps);
    } catch (const DomainError& e) {
      throw DomainError(std::string("right side, factor ") + std::to_string(f) + ": " + e.what());
    }
  }
  return {l, r};
}

template <typename Scalar>
double functionalTetrahedronCheck(const Triple6<Scalar>& s, int eps) {
  auto [l, r] = functionalTetrahedronSides(s, eps);
  return maxDifference(l, r);
}

// ---- angle chart and symplectic structure ---------------------------------

using AngleState = Eigen::Matrix<double, 6, 1>;  // (alpha1, beta1, alpha2, beta2, alpha3, beta3)
using AngleMap = std::function<AngleState(const AngleState&)>;

// The map in angle coordinates; throws DomainError on exit from the chart.
AngleState mapAngles(const AngleState& s, int eps);

Eigen::Matrix<double, 6, 6> canonicalOmega();

// Distance of the state and its image from the chart boundary {0, pi}.
double angleChartMargin(const AngleState& s, int eps);

// max |J Omega J^T - Omega| for a central-difference Jacobian of `map`.
double symplecticResidual(const AngleMap& map, const AngleState& s, double h);
double symplecticCheck(const AngleState& s, int eps, double h);

struct PoissonCoefficients {
  double aaStar;  // {a, a*} / k^2, expected 2
  double ka;      // {k, a} / (k a), expected 1
  double kaStar;  // {k, a*} / (k a*), expected -1
};
PoissonCoefficients poissonCoefficients(double alpha, double beta, double h);

// ---- covariant form ------------------------------------------------------

using Site = std::array<int, 3>;

struct CovariantField {
  // A[(i,j)] on sites; index pairs 1-based as in (3,2), (2,3), (2,1), (1,2), (3,1), (1,3)
  std::map<std::pair<int, int>, std::map<Site, double>> A;

  double get(int i, int j, const Site& m) const;
  bool has(int i, int j, const Site& m) const;
  void set(int i, int j, const Site& m, double v) { A[{i, j}][m] = v; }
  // K_ij = sqrt(1 - A_ij A_ji); throws BranchError with site on negative radicand
  double K(int i, int j, const Site& m) const;
};

// Random boundary data on a box of `extent` cubes, amplitude in A.
CovariantField makeCovariantBoundary(const Site& extent, double amplitude, unsigned long long seed);

// Apply the update along direction k (1, 2 or 3) to all cubes in `region`.
// Each cube at m takes the three faces with normals 1, 2, 3 sitting at
// m (normal 1 and 3 at their front site, normal 2 at m - e2) and writes
// the back faces.
void covariantStep(CovariantField& field, int k, const std::vector<Site>& region);

// Sweep all cubes of the box in anti-diagonal order.
void covariantEvolve(CovariantField& field, const Site& extent);

struct CovariantReport {
  double kkResidual = 0.0;    // max over cubes of the kk-relation residual
  double mapResidual = 0.0;   // max difference to mapR123 per cube
  int cubes = 0;
};
CovariantReport covariantCheck(const CovariantField& field, const Site& extent);

// The three front triples of the cube at m, eps = +1 convention.
Triple3<double> cubeFrontTriples(const CovariantField& f, const Site& m);
Triple3<double> cubeBackTriples(const CovariantField& f, const Site& m);

}  // namespace qgeo
