#include "qgeo/errors.hpp"
#include "qgeo/quadrature.hpp"
#include "qgeo/rmatrices.hpp"

#include <cmath>
#include <sstream>

namespace qgeo {

namespace {

const cplx I(0.0, 1.0);

cplx smoothFactor(const std::array<double, 6>& sg, const ModularParam& mp, Psi22Method method) {
  const auto [s1, s2, s3, p1, p2, p3] = sg;
  (void)p2;
  cplx phase = std::exp(I * M_PI * (p1 * p3 + I * mp.eta * (p1 + p3 - s2)));
  return phase * psi22(s1 - s3, -s1 + s3, s1 + s3, -p1 - p3, s2, mp, method);
}

}  // namespace

std::array<double, 6> sigmaFromSpins(const RealSpins8& s, const std::array<double, 3>& T) {
  const auto [a, e, f, g, b, c, d, h] = s;
  return {g + f - a - b - T[0], a + c - e - g + T[1], e + f - a - d - T[2],
          c + d - e - h - T[0], f + h - b - d + T[1], b + c - g - h - T[2]};
}

cplx ircWeightModular(const RealSpins8& s, const ModularWeight& w) {
  auto sg = sigmaFromSpins(s, w.T);
  double field = 0.0;
  for (int j = 0; j < 3; ++j) field += w.f[j] * (sg[j] + sg[j + 3]);
  try {
    return std::exp(field) * smoothFactor(sg, w.mp, w.method);
  } catch (const DomainError& e) {
    std::ostringstream os;
    os << e.what() << " (spins";
    for (double x : s) os << " " << x;
    os << ")";
    throw DomainError(os.str());
  }
}

ModularVertexElement modularVertexElement(const std::array<double, 6>& sg, const ModularParam& mp,
                                          Psi22Method method) {
  ModularVertexElement e;
  e.delta12 = sg[0] + sg[1] - sg[3] - sg[4];
  e.delta23 = sg[1] + sg[2] - sg[4] - sg[5];
  e.smooth = smoothFactor(sg, mp, method);
  return e;
}

double SpectralConstraintSet::tshkiResidual() const {
  return std::max({std::abs(T[1][0] - T[0][0]), std::abs(T[2][0] + T[0][1]), std::abs(T[3][0] - T[0][2]),
                   std::abs(T[2][1] - T[1][1]), std::abs(T[3][1] + T[1][2]), std::abs(T[3][2] - T[2][2])});
}

double SpectralConstraintSet::ashkiResidual() const {
  return std::max({std::abs(f[2][2] - (f[1][2] - f[0][2])), std::abs(f[3][0] - (f[2][0] - f[1][0])),
                   std::abs(f[3][1] - (f[2][1] + f[0][0])), std::abs(f[3][2] - (f[0][1] - f[1][1]))});
}

SpectralConstraintSet makeSpectralConstraintSet(const std::array<double, 6>& t, const std::array<double, 8>& fl) {
  SpectralConstraintSet c;
  c.T[0] = {t[0], t[1], t[2]};
  c.T[1] = {t[0], t[3], t[4]};
  c.T[2] = {-t[1], t[3], t[5]};
  c.T[3] = {t[2], -t[4], t[5]};
  c.f[0] = {fl[0], fl[1], fl[2]};
  c.f[1] = {fl[3], fl[4], fl[5]};
  c.f[2] = {fl[6], fl[7], fl[5] - fl[2]};
  c.f[3] = {fl[6] - fl[3], fl[7] + fl[0], fl[1] - fl[4]};
  return c;
}

TEResult modularIrcTECheck(const std::array<ModularWeight, 4>& W, const RealSpins14& sp, const ModularTEOptions& opt) {
  const auto [a1, a2, a3, a4, b1, b2, b3, b4, c1, c2, c3, c4, c5, c6] = sp;
  TEResult r;
  int evals = 0;
  auto lhs = [&](double z) {
    ++evals;
    return ircWeightModular({a4, c1, c3, c2, b3, b2, b1, z}, W[0]) *
           ircWeightModular({c1, a3, b1, b2, z, c6, c4, b4}, W[1]) *
           ircWeightModular({b1, c4, c3, z, b3, b4, a2, c5}, W[2]) *
           ircWeightModular({z, b4, b3, b2, c2, c6, c5, a1}, W[3]);
  };
  auto rhs = [&](double z) {
    ++evals;
    return ircWeightModular({b1, c4, c3, c1, a4, a3, a2, z}, W[3]) *
           ircWeightModular({c1, a3, a4, b2, c2, c6, z, a1}, W[2]) *
           ircWeightModular({a4, z, c3, c2, b3, a1, a2, c5}, W[1]) *
           ircWeightModular({z, a3, a2, a1, c5, c6, c4, b4}, W[0]);
  };
  double center = 0.0;
  for (double x : sp) center += x;
  center /= sp.size();
  r.lhs = integrateRealLine(lhs, opt.relTol, opt.tailTol, opt.Z0, 2.0, 60.0, center).value;
  r.rhs = integrateRealLine(rhs, opt.relTol, opt.tailTol, opt.Z0, 2.0, 60.0, center).value;
  r.terms = evals;
  r.residual = relativeResidual(r.lhs, r.rhs, 1e-300);
  return r;
}

}  // namespace qgeo
