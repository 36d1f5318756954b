#include "qgeo/geometry.hpp"

#include "qgeo/errors.hpp"

#include <cmath>
#include <sstream>

namespace qgeo {

namespace {

// Centered coordinates (rows = points) and their singular values.
Eigen::MatrixXd centered(const std::vector<Point>& pts, Point& mean) {
  const int n = static_cast<int>(pts.size());
  mean = Point::Zero(pts[0].size());
  for (const auto& p : pts) mean += p;
  mean /= n;
  Eigen::MatrixXd M(n, pts[0].size());
  for (int i = 0; i < n; ++i) M.row(i) = (pts[i] - mean).transpose();
  return M;
}

// Project onto the best-fit affine subspace of dimension d; rows = coords.
Eigen::MatrixXd principalCoords(const std::vector<Point>& pts, int d) {
  Point mean;
  Eigen::MatrixXd M = centered(pts, mean);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinV);
  return M * svd.matrixV().leftCols(d);
}

// Linear least-squares sphere in R^d: |x|^2 = 2 c.x + s.
double sphereFitResidual(const Eigen::MatrixXd& X) {
  const int n = X.rows(), d = X.cols();
  double scale = X.cwiseAbs().maxCoeff();
  if (scale == 0) return 0;
  Eigen::MatrixXd Y = X / scale;
  Eigen::MatrixXd A(n, d + 1);
  Eigen::VectorXd rhs(n);
  A.leftCols(d) = 2.0 * Y;
  A.col(d).setOnes();
  rhs = Y.rowwise().squaredNorm();
  Eigen::VectorXd sol = A.colPivHouseholderQr().solve(rhs);
  Eigen::VectorXd c = sol.head(d);
  double R = std::sqrt(std::max(0.0, sol(d) + c.squaredNorm()));
  if (R == 0) return 0;
  double worst = 0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs((Y.row(i).transpose() - c).norm() - R));
  return worst / R;
}

Eigen::Vector3d cross3(const Eigen::Vector3d& a, const Eigen::Vector3d& b) { return a.cross(b); }

}  // namespace

std::array<std::array<Point, 4>, 6> Hexahedron::faces() const {
  return {{{x0, x2, x23, x3},
           {x0, x1, x13, x3},
           {x0, x1, x12, x2},
           {x1, x12, x123, x13},
           {x2, x12, x123, x23},
           {x3, x13, x123, x23}}};
}

std::array<LabeledQuad, 3> Hexahedron::frontLabeled() const {
  return {{{x0, x2, x3, x23}, {x1, x0, x13, x3}, {x12, x2, x1, x0}}};
}

std::array<LabeledQuad, 3> Hexahedron::backLabeled() const {
  return {{{x1, x12, x13, x123}, {x12, x2, x123, x23}, {x123, x23, x13, x3}}};
}

Point hexFlip(const Point& x0, const Point& x1, const Point& x2, const Point& x3, const Point& x12,
              const Point& x13, const Point& x23) {
  std::vector<Point> all = {x0, x1, x2, x3, x12, x13, x23};
  for (const auto& p : all)
    if (p.size() < 3 || !p.allFinite()) throw PreconditionError("hexFlip: points must be finite, dimension >= 3");
  double diam = 0;
  for (const auto& p : all)
    for (const auto& q : all) diam = std::max(diam, (p - q).norm());
  if (diam == 0) throw DegeneracyError("hexFlip: all points coincide", INFINITY);

  Eigen::MatrixXd D(x0.size(), 3);
  D << x1 - x0, x2 - x0, x3 - x0;
  Eigen::JacobiSVD<Eigen::MatrixXd> frame(D, Eigen::ComputeThinU);
  const auto& sv = frame.singularValues();
  if (sv(2) <= 1e-12 * sv(0)) {
    std::ostringstream os;
    os << "hexFlip: x0..x3 do not span three dimensions (ratio " << sv(2) / sv(0) << ")";
    throw DegeneracyError(os.str(), sv(0) / std::max(sv(2), 1e-300));
  }
  Eigen::MatrixXd U = frame.matrixU();
  auto local = [&](const Point& p) -> Eigen::Vector3d { return U.transpose() * (p - x0) / diam; };
  const Eigen::Vector3d p1 = local(x1), p2 = local(x2), p3 = local(x3), p12 = local(x12),
                        p13 = local(x13), p23 = local(x23);

  Eigen::Matrix3d Nrm;
  Eigen::Vector3d rhs;
  const Eigen::Vector3d planes[3][3] = {{p1, p12, p13}, {p2, p12, p23}, {p3, p13, p23}};
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d n = cross3(planes[i][1] - planes[i][0], planes[i][2] - planes[i][0]);
    double len = n.norm();
    if (len < 1e-14) throw DegeneracyError("hexFlip: collinear face corners", INFINITY);
    n /= len;
    Nrm.row(i) = n.transpose();
    rhs(i) = n.dot(planes[i][0]);
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(Nrm, Eigen::ComputeFullU | Eigen::ComputeFullV);
  double cond = svd.singularValues()(0) / std::max(svd.singularValues()(2), 1e-300);
  if (cond > 1e8) {
    std::ostringstream os;
    os << "hexFlip: near-parallel planes, condition number " << cond;
    throw DegeneracyError(os.str(), cond);
  }
  Eigen::Vector3d sol = svd.solve(rhs);
  return x0 + diam * (U * sol);
}

Hexahedron completeHexahedron(const Point& x0, const Point& x1, const Point& x2, const Point& x3,
                              const Point& x12, const Point& x13, const Point& x23) {
  return {x0, x1, x2, x3, x12, x13, x23, hexFlip(x0, x1, x2, x3, x12, x13, x23)};
}

double planeResidual(const Point& p, const Point& a, const Point& b, const Point& c) {
  Eigen::MatrixXd D(a.size(), 2);
  D << b - a, c - a;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(D);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(a.size(), 2);
  Point r = (p - a) - Q * (Q.transpose() * (p - a));
  return r.norm();
}

double planarityResidual(const std::vector<Point>& pts) {
  Point mean;
  Eigen::MatrixXd M = centered(pts, mean);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() < 3 || s(0) == 0) return 0;
  return s(2) / s(0);
}

double concyclicityResidual(const std::vector<Point>& pts) {
  return sphereFitResidual(principalCoords(pts, 2));
}

double cosphericityResidual(const std::vector<Point>& pts) {
  return sphereFitResidual(principalCoords(pts, 3));
}

double MiquelReport::maxResidual() const {
  return std::max({backConcyclicity[0], backConcyclicity[1], backConcyclicity[2], cosphericity});
}

MiquelReport miquelCheck(const Hexahedron& hex, double frontTol) {
  auto f = hex.faces();
  const char* names[3] = {"(x0,x2,x23,x3)", "(x0,x1,x13,x3)", "(x0,x1,x12,x2)"};
  for (int i = 0; i < 3; ++i) {
    std::vector<Point> q(f[i].begin(), f[i].end());
    double r = concyclicityResidual(q);
    if (planarityResidual(q) > frontTol || r > frontTol) {
      std::ostringstream os;
      os << "miquelCheck: front face " << names[i] << " is not concyclic (residual " << r << ")";
      throw PreconditionError(os.str());
    }
  }
  MiquelReport rep;
  for (int i = 0; i < 3; ++i) {
    std::vector<Point> q(f[3 + i].begin(), f[3 + i].end());
    rep.backConcyclicity[i] = std::max(concyclicityResidual(q), planarityResidual(q));
  }
  auto v = hex.vertices();
  rep.cosphericity = cosphericityResidual(std::vector<Point>(v.begin(), v.end()));
  return rep;
}

FaceAngles extractAngles(const LabeledQuad& face, double planarTol) {
  // cyclic order alpha, beta, delta, gamma
  std::vector<Point> ring = {face.alpha, face.beta, face.delta, face.gamma};
  double pr = planarityResidual(ring);
  if (pr > planarTol) {
    std::ostringstream os;
    os << "extractAngles: face not planar (residual " << pr << ")";
    throw PreconditionError(os.str());
  }
  Eigen::MatrixXd P = principalCoords(ring, 2);
  double area = 0;
  for (int i = 0; i < 4; ++i) {
    int j = (i + 1) % 4;
    area += P(i, 0) * P(j, 1) - P(j, 0) * P(i, 1);
  }
  double orient = area >= 0 ? 1.0 : -1.0;
  double ang[4];
  FaceAngles out;
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector2d prev = P.row((i + 3) % 4).transpose(), cur = P.row(i).transpose(),
                    next = P.row((i + 1) % 4).transpose();
    Eigen::Vector2d u = prev - cur, v = next - cur;
    double c = u.dot(v), s = u(0) * v(1) - u(1) * v(0);
    // interior angle: rotate the outgoing edge onto the incoming one
    double theta = std::atan2(-orient * s, c);
    if (theta < 0) theta += 2 * M_PI;
    ang[i] = theta;
    if (theta > M_PI) out.reflex = true;
  }
  out.alpha = ang[0];
  out.beta = ang[1];
  out.delta = ang[2];
  out.gamma = ang[3];
  return out;
}

std::array<FaceAngles, 3> frontAngles(const Hexahedron& hex) {
  auto f = hex.frontLabeled();
  return {extractAngles(f[0]), extractAngles(f[1]), extractAngles(f[2])};
}

std::array<FaceAngles, 3> backAngles(const Hexahedron& hex) {
  auto f = hex.backLabeled();
  return {extractAngles(f[0]), extractAngles(f[1]), extractAngles(f[2])};
}

Point projectOntoCircle(const Point& a, const Point& b, const Point& c, const Point& target) {
  // circumcenter in the plane of a, b, c
  Point u = b - a, v = c - a;
  double uu = u.dot(u), vv = v.dot(v), uv = u.dot(v);
  double det = 2.0 * (uu * vv - uv * uv);
  if (std::abs(det) < 1e-14 * uu * vv) throw DegeneracyError("projectOntoCircle: collinear points", INFINITY);
  double s = (vv * (uu - uv)) / det, t = (uu * (vv - uv)) / det;
  Point center = a + s * u + t * v;
  double R = (a - center).norm();
  Eigen::MatrixXd D(a.size(), 2);
  D << u, v;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(D);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(a.size(), 2);
  Point d = Q * (Q.transpose() * (target - center));
  if (d.norm() < 1e-14) throw DegeneracyError("projectOntoCircle: target at the center", INFINITY);
  return center + R * d / d.norm();
}

bool isConvexQuad(const std::array<Point, 4>& quad) {
  std::vector<Point> ring(quad.begin(), quad.end());
  Eigen::MatrixXd P = principalCoords(ring, 2);
  int sign = 0;
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector2d a = P.row(i), b = P.row((i + 1) % 4), c = P.row((i + 2) % 4);
    Eigen::Vector2d e1 = b - a, e2 = c - b;
    double cr = e1(0) * e2(1) - e1(1) * e2(0);
    if (std::abs(cr) < 1e-12 * e1.norm() * e2.norm()) return false;
    int sg = cr > 0 ? 1 : -1;
    if (sign == 0) sign = sg;
    else if (sg != sign) return false;
  }
  return true;
}

Hexahedron randomCircularHexahedron(std::mt19937_64& rng, double noise) {
  std::normal_distribution<double> g(0.0, 1.0);
  auto jitter = [&](double s) {
    Point p(3);
    p << g(rng), g(rng), g(rng);
    return Point(s * p);
  };
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Point x0 = jitter(noise);
    Point x1 = Point(Eigen::Vector3d::UnitX()) + jitter(noise);
    Point x2 = Point(Eigen::Vector3d::UnitY()) + jitter(noise);
    Point x3 = Point(Eigen::Vector3d::UnitZ()) + jitter(noise);
    try {
      Point x12 = projectOntoCircle(x0, x1, x2, x1 + x2 - x0 + jitter(noise));
      Point x13 = projectOntoCircle(x0, x1, x3, x1 + x3 - x0 + jitter(noise));
      Point x23 = projectOntoCircle(x0, x2, x3, x2 + x3 - x0 + jitter(noise));
      Hexahedron h = completeHexahedron(x0, x1, x2, x3, x12, x13, x23);
      bool ok = true;
      for (const auto& f : h.faces()) ok = ok && isConvexQuad(f);
      if (ok) return h;
    } catch (const DegeneracyError&) {
    }
  }
  throw DegeneracyError("randomCircularHexahedron: no admissible sample", 0);
}

}  // namespace qgeo
