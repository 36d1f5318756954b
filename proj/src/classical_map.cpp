#include "qgeo/classical_map.hpp"

#include "qgeo/geometry.hpp"

#include <sstream>

namespace qgeo {

Triple anglesToCircular(double alpha, double beta) {
  double sa = std::sin(alpha);
  if (std::abs(sa) < 1e-14) throw SingularityError("anglesToCircular: sin(alpha) = 0");
  return {std::sin(beta) / sa, std::sin(alpha + beta) / sa, std::sin(alpha - beta) / sa};
}

std::pair<double, double> circularToAngles(const Triple& t) {
  if (std::abs(t.k) < 1e-14) throw SingularityError("circularToAngles: k = 0");
  double ca = (t.a - t.aStar) / (2.0 * t.k), cb = 0.5 * (t.a + t.aStar);
  if (std::abs(ca) > 1.0 || std::abs(cb) > 1.0) throw DomainError("circularToAngles: point outside the angle chart");
  return {std::acos(ca), std::acos(cb)};
}

Eigen::Matrix2d edgeMatrix(const FaceAngles& f) {
  double sd = std::sin(f.delta);
  if (std::abs(sd) < 1e-14) throw SingularityError("edgeMatrix: sin(delta) = 0");
  Eigen::Matrix2d X;
  X << std::sin(f.gamma) / sd, std::sin(f.delta + f.beta) / sd, std::sin(f.delta + f.gamma) / sd,
      std::sin(f.beta) / sd;
  return X;
}

std::pair<double, double> edgePropagate(double lp, double lq, const FaceAngles& f) {
  Eigen::Vector2d l = edgeMatrix(f) * Eigen::Vector2d(lp, lq);
  return {l(0), l(1)};
}

double edgeConstraintResidual(const Eigen::Matrix2d& X) {
  double A = X(0, 0), B = X(0, 1), C = X(1, 0), D = X(1, 1);
  return std::abs((A * D - B * C) * (A * B - C * D) - (D * B - A * C));
}

AngleState mapAngles(const AngleState& s, int eps) {
  Triple3<double> t;
  for (int j = 0; j < 3; ++j) t[j] = anglesToCircular(s(2 * j), s(2 * j + 1));
  Triple3<double> r = mapR123(t, eps);
  AngleState out;
  for (int j = 0; j < 3; ++j) {
    auto [al, be] = circularToAngles(r[j]);
    Triple back = anglesToCircular(al, be);
    double err = std::max({std::abs(back.k - r[j].k), std::abs(back.a - r[j].a), std::abs(back.aStar - r[j].aStar)});
    if (err > 1e-8) throw DomainError("mapAngles: image leaves the angle chart");
    out(2 * j) = al;
    out(2 * j + 1) = be;
  }
  return out;
}

double angleChartMargin(const AngleState& s, int eps) {
  AngleState out = mapAngles(s, eps);
  double m = M_PI;
  for (int j = 0; j < 6; ++j) m = std::min({m, s(j), M_PI - s(j), out(j), M_PI - out(j)});
  return m;
}

Eigen::Matrix<double, 6, 6> canonicalOmega() {
  Eigen::Matrix<double, 6, 6> O = Eigen::Matrix<double, 6, 6>::Zero();
  for (int j = 0; j < 3; ++j) {
    O(2 * j, 2 * j + 1) = 1.0;
    O(2 * j + 1, 2 * j) = -1.0;
  }
  return O;
}

double symplecticResidual(const AngleMap& map, const AngleState& s, double h) {
  Eigen::Matrix<double, 6, 6> J;
  for (int c = 0; c < 6; ++c) {
    AngleState p = s, m = s;
    p(c) += h;
    m(c) -= h;
    J.col(c) = (map(p) - map(m)) / (2.0 * h);
  }
  Eigen::Matrix<double, 6, 6> O = canonicalOmega();
  return (J * O * J.transpose() - O).cwiseAbs().maxCoeff();
}

double symplecticCheck(const AngleState& s, int eps, double h) {
  return symplecticResidual([eps](const AngleState& x) { return mapAngles(x, eps); }, s, h);
}

PoissonCoefficients poissonCoefficients(double alpha, double beta, double h) {
  auto grad = [&](auto&& f) {
    double fa = (f(alpha + h, beta) - f(alpha - h, beta)) / (2 * h);
    double fb = (f(alpha, beta + h) - f(alpha, beta - h)) / (2 * h);
    return std::pair<double, double>(fa, fb);
  };
  auto K = [](double a, double b) { return anglesToCircular(a, b).k; };
  auto A = [](double a, double b) { return anglesToCircular(a, b).a; };
  auto S = [](double a, double b) { return anglesToCircular(a, b).aStar; };
  auto bracket = [](std::pair<double, double> f, std::pair<double, double> g) {
    return f.first * g.second - f.second * g.first;
  };
  auto gk = grad(K), ga = grad(A), gs = grad(S);
  Triple t = anglesToCircular(alpha, beta);
  return {bracket(ga, gs) / (t.k * t.k), bracket(gk, ga) / (t.k * t.a), bracket(gk, gs) / (t.k * t.aStar)};
}

}  // namespace qgeo
