#include "qgeo/specfun.hpp"

#include "qgeo/errors.hpp"

#include <cmath>
#include <sstream>

namespace qgeo {

cplx qPochhammer(cplx x, cplx qsq, int n) {
  cplx prod = 1.0, qj = 1.0;
  for (int j = 0; j < n; ++j) {
    prod *= 1.0 - qj * x;
    qj *= qsq;
  }
  return prod;
}

cplx qBinomial(int n, int k, cplx qsq) {
  if (k < 0 || k > n) return 0.0;
  // product form avoids dividing by (q^2;q^2)_n
  cplx num = 1.0, den = 1.0;
  for (int j = 1; j <= k; ++j) {
    num *= 1.0 - std::pow(qsq, n - k + j);
    den *= 1.0 - std::pow(qsq, j);
  }
  return num / den;
}

namespace {

constexpr double kTerminateTol = 1e-13;

}  // namespace

cplx qGauss2phi1(cplx a, cplx b, cplx c, cplx qsq, cplx z) {
  cplx sum = 1.0, term = 1.0, qn = 1.0;
  int small = 0;
  for (int n = 0; n < 100000; ++n) {
    cplx fa = 1.0 - a * qn, fb = 1.0 - b * qn;
    if (std::abs(fa) < kTerminateTol || std::abs(fb) < kTerminateTol) return sum;
    if (n == 0 && !(std::abs(z) < 1.0 && std::abs(qsq) < 1.0))
      throw DomainError("2phi1: non-terminating series needs |z| < 1 and |qsq| < 1");
    cplx fc = 1.0 - c * qn, fq = 1.0 - qn * qsq;
    if (std::abs(fc) < kTerminateTol || std::abs(fq) < kTerminateTol)
      throw SingularityError("2phi1: vanishing denominator factor");
    term *= fa * fb * z / (fc * fq);
    sum += term;
    small = std::abs(term) < 1e-17 * std::abs(sum) ? small + 1 : 0;
    if (small >= 3) return sum;
    qn *= qsq;
  }
  throw AccuracyError("2phi1: series did not converge", std::abs(term / sum));
}

cplx qGauss2phi1Terminating(int m, cplx b, cplx c, cplx qsq, cplx z) {
  cplx sum = 1.0, term = 1.0, qn = 1.0;
  for (int n = 0; n < m; ++n) {
    cplx fa = 1.0 - std::pow(qsq, n - m);
    cplx fc = 1.0 - c * qn, fq = 1.0 - qn * qsq;
    if (std::abs(fc) < kTerminateTol || std::abs(fq) < kTerminateTol)
      throw SingularityError("2phi1: vanishing denominator factor");
    term *= fa * (1.0 - b * qn) * z / (fc * fq);
    sum += term;
    qn *= qsq;
  }
  return sum;
}

cplx rootPower(int N, long long k) {
  long long m = (k * (N + 1)) % (2LL * N);
  if (m < 0) m += 2LL * N;
  return std::polar(1.0, M_PI * static_cast<double>(m) / N);
}

double FermatPoint::curveResidual() const {
  return std::abs(std::pow(x, N) + std::pow(y, N) - 1.0);
}

std::vector<cplx> fermatPhiTable(const FermatPoint& p) {
  if (p.N < 2) throw DomainError("Fermat point needs N >= 2");
  if (std::abs(p.y) == 0.0) throw SingularityError("Fermat point with y = 0");
  if (p.curveResidual() > 1e-10) {
    std::ostringstream os;
    os << "point off the Fermat curve: |x^N + y^N - 1| = " << p.curveResidual();
    throw PreconditionError(os.str());
  }
  std::vector<cplx> t(p.N);
  t[0] = 1.0;
  for (int n = 1; n < p.N; ++n) {
    cplx d = 1.0 - p.x * rootPower(p.N, 2LL * n);
    if (std::abs(d) < 1e-14) throw SingularityError("Fermat dilogarithm: vanishing factor");
    t[n] = t[n - 1] * p.y / d;
  }
  return t;
}

cplx fermatPhi(const FermatPoint& p, long long n) {
  long long r = n % p.N;
  if (r < 0) r += p.N;
  return fermatPhiTable(p)[r];
}

SphericalTriangle sphericalSidesFromAngles(double t1, double t2, double t3) {
  const double th[3] = {t1, t2, t3};
  for (int i = 0; i < 3; ++i)
    if (!(th[i] > 0.0 && th[i] < M_PI)) throw DomainError("spherical angle outside (0, pi)");
  double sum = t1 + t2 + t3;
  if (!(sum > M_PI + 1e-12)) throw DomainError("angle sum must exceed pi");
  if (!(sum < 3 * M_PI)) throw DomainError("angle sum must be below 3 pi");
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    if (!((M_PI - th[j]) + (M_PI - th[k]) > (M_PI - th[i]) + 1e-12)) {
      std::ostringstream os;
      os << "polar triangle inequality violated: (pi - theta" << j + 1 << ") + (pi - theta" << k + 1
         << ") > pi - theta" << i + 1;
      throw DomainError(os.str());
    }
  }
  SphericalTriangle tri;
  tri.theta = {t1, t2, t3};
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    double c = (std::cos(th[i]) + std::cos(th[j]) * std::cos(th[k])) / (std::sin(th[j]) * std::sin(th[k]));
    if (std::abs(c) > 1.0) throw DomainError("no spherical triangle with these angles");
    tri.a[i] = std::acos(c);
  }
  const auto& a = tri.a;
  tri.beta[1] = 0.5 * (a[1] + a[2] - a[0]);
  tri.beta[2] = 0.5 * (a[0] + a[2] - a[1]);
  tri.beta[3] = 0.5 * (a[0] + a[1] - a[2]);
  tri.beta[0] = M_PI - tri.beta[1] - tri.beta[2] - tri.beta[3];
  return tri;
}

std::array<FermatPoint, 4> fermatPointsFromTriangle(const SphericalTriangle& tri, int N) {
  if (N < 2) throw DomainError("Fermat points need N >= 2");
  const auto& be = tri.beta;
  double a2 = tri.a[1];
  const double sb[4] = {std::sin(be[0]), std::sin(be[1]), std::sin(be[2]), std::sin(be[3])};
  for (int i = 0; i < 4; ++i)
    if (!(sb[i] > 0.0)) {
      std::ostringstream os;
      os << "sin(beta" << i << ") is not positive";
      throw DomainError(os.str());
    }
  double sa2 = std::sin(a2);
  if (!(sa2 > 0.0)) throw DomainError("sin(a2) is not positive");
  auto E = [N](double x) { return std::polar(1.0, x / N); };
  auto r = [N](double x) { return std::pow(x, 1.0 / N); };
  std::array<FermatPoint, 4> p;
  p[0] = {E(-a2) * r(sb[2] / sb[0]), E(be[2]) * r(sa2 / sb[0]), N};
  p[1] = {E(-a2) * r(sb[0] / sb[2]), E(be[0]) * r(sa2 / sb[2]), N};
  p[2] = {E(-(a2 + M_PI)) * r(sb[3] / sb[1]), E(-be[3]) * r(sa2 / sb[1]), N};
  p[3] = {E(-(a2 + M_PI)) * r(sb[1] / sb[3]), E(-be[1]) * r(sa2 / sb[3]), N};
  return p;
}

}  // namespace qgeo
