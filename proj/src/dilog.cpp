#include "qgeo/errors.hpp"
#include "qgeo/quadrature.hpp"
#include "qgeo/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qgeo {

namespace {

const cplx I(0.0, 1.0);

// log phi(z) from the defining integral, contour shifted by +i delta.
cplx logDilogQuadrature(cplx z, cplx b) {
  cplx eta = 0.5 * (b + 1.0 / b);
  double margin = eta.real() - std::abs(z.imag());
  if (margin < 0.05) {
    std::ostringstream os;
    os << "quantum dilogarithm: z too close to a pole/zero line (distance " << margin << ")";
    throw DomainError(os.str());
  }
  double delta = M_PI * std::min(b.real(), (1.0 / b).real()) / 4.0;
  double rate = 2.0 * margin;
  double T = 45.0 / rate;
  auto f = [&](double t) -> cplx {
    cplx x(t, delta);
    return std::exp(-2.0 * I * z * x) / (std::sinh(x * b) * std::sinh(x / b) * x);
  };
  QuadResult r = integrateDoubling(f, -T, T, 1e-13, 32, 1 << 14, 20, 1.0);
  return r.value / 4.0;
}

// log (-qq x; qq^2)_inf
cplx logHalfProduct(cplx x, cplx qq) {
  cplx q2 = qq * qq, t = qq * x, prod = 1.0, logs = 0.0;
  int n = 0;
  while (std::abs(t) > 1e-18) {
    prod *= 1.0 + t;
    t *= q2;
    // fold into logs periodically so the product never under/overflows
    if (++n % 32 == 0) {
      logs += std::log(prod);
      prod = 1.0;
    }
  }
  return logs + std::log(prod);
}

cplx logDilogProductRaw(cplx z, const ModularParam& mp) {
  return logHalfProduct(std::exp(2.0 * M_PI * mp.b * z), mp.q) -
         logHalfProduct(std::exp(2.0 * M_PI * z / mp.b), mp.qTilde);
}

}  // namespace

ModularParam ModularParam::fromB(cplx b) {
  if (b.real() == 0.0) throw DomainError("modular parameter needs Re(b) != 0");
  ModularParam mp;
  mp.b = b;
  mp.q = std::exp(I * M_PI * b * b);
  mp.qTilde = std::exp(-I * M_PI / (b * b));
  mp.eta = 0.5 * (b + 1.0 / b);
  mp.logPhi0 = 0.0;
  mp.logPhi0 = mp.seriesAdmissible() ? logDilogProductRaw(0.0, mp) : logDilogQuadrature(0.0, b);
  return mp;
}

ModularParam ModularParam::fromPolar(double modulus, double argument) {
  return fromB(std::polar(modulus, argument));
}

double ModularParam::etaDrift() const { return std::abs(0.5 * (b + 1.0 / b) - eta); }

cplx logQuantumDilog(cplx z, const ModularParam& mp) {
  if (!mp.seriesAdmissible()) return logDilogQuadrature(z, mp.b);
  if (z.real() > 0.0) return 2.0 * mp.logPhi0 + I * M_PI * z * z - logDilogProductRaw(-z, mp);
  return logDilogProductRaw(z, mp);
}

cplx quantumDilog(cplx z, const ModularParam& mp, DilogMethod method) {
  if (method == DilogMethod::Quadrature) return std::exp(logDilogQuadrature(z, mp.b));
  if (!mp.seriesAdmissible())
    throw DomainError("product formula for phi needs Im(b^2) > 0");
  return std::exp(logQuantumDilog(z, mp));
}

cplx quantumDilogResidue(const ModularParam& mp) {
  return -std::exp(logQuantumDilog(I * mp.eta - I * mp.b, mp)) / (2.0 * M_PI * mp.b);
}

namespace {

struct Psi22Setup {
  cplx u[4];
  cplx w;
};

Psi22Setup psiSetup(cplx c1, cplx c2, cplx c3, cplx c4, cplx c0, const ModularParam& mp) {
  Psi22Setup s;
  s.u[0] = 0.5 * (c1 + I * mp.eta);
  s.u[1] = 0.5 * (c2 + I * mp.eta);
  s.u[2] = 0.5 * (c3 - I * mp.eta);
  s.u[3] = 0.5 * (c4 - I * mp.eta);
  s.w = -c0 - I * mp.eta;
  return s;
}

// distance from d to the lattice i(m b + n / b), m, n integers
double ladderDistance(cplx d, const ModularParam& mp) {
  double best = 1e300;
  for (int m = -24; m <= 24; ++m)
    for (int n = -24; n <= 24; ++n)
      best = std::min(best, std::abs(d - I * (double(m) * mp.b + double(n) / mp.b)));
  return best;
}

void checkPinch(const cplx* cTop, const cplx* cBottom, const ModularParam& mp) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      cplx d = 0.5 * (cTop[i] - cBottom[j]) - I * mp.eta;
      for (int m = 0; m <= 24; ++m)
        for (int n = 0; n <= 24; ++n) {
          double dist = std::abs(d - I * (double(m) * mp.b + double(n) / mp.b));
          if (dist < 1e-9) {
            std::ostringstream os;
            os << "2psi2: contour pinch between c" << i + 1 << " and c" << j + 3;
            throw DegeneracyError(os.str(), dist);
          }
        }
    }
}

cplx psiQuadrature(const Psi22Setup& s, const ModularParam& mp, cplx c0, const cplx* c) {
  double er = mp.eta.real();
  for (int i = 0; i < 2; ++i)
    if (!(c[i].imag() < er)) throw DomainError("2psi2 quadrature: numerator poles cross the real axis");
  for (int i = 2; i < 4; ++i)
    if (!(c[i].imag() > -er)) throw DomainError("2psi2 quadrature: denominator zeros cross the real axis");
  cplx sdiff = 0.5 * (c[0] + c[1] - c[2] - c[3]);
  double rateL = er + c0.imag();
  double rateR = er + (sdiff - c0).imag();
  if (!(rateL > 0.02 && rateR > 0.02)) throw DomainError("2psi2 quadrature: integrand does not decay");
  double reMin = 1e300, reMax = -1e300;
  for (const cplx& u : s.u) {
    reMin = std::min(reMin, -u.real());
    reMax = std::max(reMax, -u.real());
  }
  double lo = reMin - 50.0 / (2.0 * M_PI * rateL);
  double hi = reMax + 50.0 / (2.0 * M_PI * rateR);
  auto f = [&](double x) -> cplx {
    cplx z(x, 0.0);
    return std::exp(2.0 * M_PI * I * z * s.w + logQuantumDilog(z + s.u[0], mp) +
                    logQuantumDilog(z + s.u[1], mp) - logQuantumDilog(z + s.u[2], mp) -
                    logQuantumDilog(z + s.u[3], mp));
  };
  int panels = std::max(8, static_cast<int>(std::ceil((hi - lo) / 1.0)));
  // When the integrand oscillates far above its integral, accuracy is bounded
  // by roundoff on the integral of |f|, not by the value itself.
  double l1 = std::abs(integratePanels([&](double x) -> cplx { return std::abs(f(x)); }, lo, hi, panels, 20));
  return integrateDoubling(f, lo, hi, 1e-12, panels, panels << 8, 20, 1e-2 * l1).value;
}

cplx psiResidue(const Psi22Setup& s, const ModularParam& mp, const cplx* c) {
  if (!mp.seriesAdmissible()) throw DomainError("2psi2 residue series needs Im(b^2) > 0");
  const cplx b = mp.b, q = mp.q, qt = mp.qTilde;
  cplx sdiff = 0.5 * (c[0] + c[1] - c[2] - c[3]);
  cplx c0 = -s.w - I * mp.eta;
  double r1 = std::abs(-q * std::exp(2.0 * M_PI * b * c0));
  double r2 = std::abs(-qt * std::exp(2.0 * M_PI * (c0 - sdiff) / b));
  if (!(r1 < 0.999 && r2 < 0.999)) {
    std::ostringstream os;
    os << "2psi2 residue series outside its convergence domain (ratios " << r1 << ", " << r2 << ")";
    throw DomainError(os.str());
  }
  cplx e[4], et[4];
  for (int i = 0; i < 4; ++i) {
    e[i] = std::exp(2.0 * M_PI * b * s.u[i]);
    et[i] = std::exp(2.0 * M_PI * s.u[i] / b);
  }
  cplx pre = std::exp(-2.0 * M_PI * b * s.w), preT = std::exp(-2.0 * M_PI * s.w / b);
  auto rho = [&](cplx z) {
    cplx X = q * std::exp(2.0 * M_PI * b * z);
    return pre * (1.0 + X * e[2]) * (1.0 + X * e[3]) / ((1.0 + X * e[0]) * (1.0 + X * e[1]));
  };
  auto rhoT = [&](cplx z) {
    cplx X = std::exp(2.0 * M_PI * z / b) / qt;
    return preT * (1.0 + X * et[2]) * (1.0 + X * et[3]) / ((1.0 + X * et[0]) * (1.0 + X * et[1]));
  };
  auto series = [](cplx z, cplx step, auto&& ratio) {
    cplx sum = 0.0, t = 1.0;
    int small = 0;
    for (int m = 0; m < 200000; ++m) {
      sum += t;
      small = std::abs(t) < 1e-16 * std::abs(sum) ? small + 1 : 0;
      if (small >= 3) return sum;
      t *= ratio(z);
      z += step;
    }
    throw AccuracyError("2psi2 residue series did not converge", std::abs(t / sum));
  };
  cplx res = quantumDilogResidue(mp);
  cplx total = 0.0;
  for (int i = 0; i < 2; ++i) {
    cplx p0 = I * mp.eta - s.u[i];
    cplx base = std::exp(2.0 * M_PI * I * p0 * s.w + logQuantumDilog(p0 + s.u[1 - i], mp) -
                         logQuantumDilog(p0 + s.u[2], mp) - logQuantumDilog(p0 + s.u[3], mp)) *
                res;
    total += base * series(p0, I * b, rho) * series(p0, I / b, rhoT);
  }
  return 2.0 * M_PI * I * total;
}

}  // namespace

cplx psi22(cplx c1, cplx c2, cplx c3, cplx c4, cplx c0, const ModularParam& mp, Psi22Method method) {
  const cplx c[4] = {c1, c2, c3, c4};
  checkPinch(c, c + 2, mp);
  Psi22Setup s = psiSetup(c1, c2, c3, c4, c0, mp);
  if (method == Psi22Method::ResidueSeries) {
    // coinciding pole ladders of the two numerator factors: the simple-pole sum
    // does not apply, so extrapolate from split points (analytic in c1, c2)
    if (ladderDistance(0.5 * (c1 - c2), mp) < 1e-4) {
      const double h = 4e-3;
      auto at = [&](double t) {
        const cplx cs[4] = {c1 + t, c2 - t, c3, c4};
        return psiResidue(psiSetup(cs[0], cs[1], c3, c4, c0, mp), mp, cs);
      };
      cplx f1 = 0.5 * (at(h) + at(-h)), f2 = 0.5 * (at(2 * h) + at(-2 * h));
      return (4.0 * f1 - f2) / 3.0;
    }
    return psiResidue(s, mp, c);
  }
  return psiQuadrature(s, mp, c0, c);
}

}  // namespace qgeo
