#include "qgeo/errors.hpp"
#include "qgeo/rmatrices.hpp"

#include <cmath>

namespace qgeo {

namespace {

int mod(long long x, int N) {
  long long r = x % N;
  return static_cast<int>(r < 0 ? r + N : r);
}

}  // namespace

CyclicWeightData CyclicWeightData::fromPoints(const std::array<FermatPoint, 4>& pts) {
  CyclicWeightData d;
  d.N = pts[0].N;
  d.p = pts;
  for (int j = 0; j < 4; ++j) {
    if (pts[j].N != d.N) throw PreconditionError("Fermat points must share N");
    d.phi[j] = fermatPhiTable(pts[j]);
  }
  return d;
}

CyclicWeightData CyclicWeightData::fromAngles(double t1, double t2, double t3, int N) {
  return fromPoints(fermatPointsFromTriangle(sphericalSidesFromAngles(t1, t2, t3), N));
}

cplx CyclicWeightData::phiAt(int j, long long n) const { return phi[j][mod(n, N)]; }

cplx cyclicVertexElement(const Index3& n, const Index3& np, const CyclicWeightData& d) {
  const int N = d.N;
  const auto [n1, n2, n3] = n;
  const auto [m1, m2, m3] = np;
  if (mod(n1 + n2 - m1 - m2, N) != 0 || mod(n2 + n3 - m2 - m3, N) != 0) return 0.0;
  cplx sum = 0.0;
  for (int k = 0; k < N; ++k)
    sum += rootPower(N, -2LL * k * m2) * d.phiAt(0, k + n1 + m3) * d.phiAt(1, k) /
           (d.phiAt(2, k + n1) * d.phiAt(3, k + n3));
  return rootPower(N, static_cast<long long>(n1) * n3 - static_cast<long long>(m2) * (n1 + n3)) * sum;
}

SpMat cyclicRMatrix(const CyclicWeightData& d) {
  const int N = d.N;
  std::vector<Eigen::Triplet<cplx>> trips;
  for (int n1 = 0; n1 < N; ++n1)
    for (int n2 = 0; n2 < N; ++n2)
      for (int n3 = 0; n3 < N; ++n3)
        for (int m2 = 0; m2 < N; ++m2) {
          int m1 = mod(n1 + n2 - m2, N), m3 = mod(n2 + n3 - m2, N);
          cplx v = cyclicVertexElement({n1, n2, n3}, {m1, m2, m3}, d);
          if (v != 0.0) trips.emplace_back((n1 * N + n2) * N + n3, (m1 * N + m2) * N + m3, v);
        }
  SpMat R(N * N * N, N * N * N);
  R.setFromTriplets(trips.begin(), trips.end());
  return R;
}

cplx ircWeightCyclic(const Spins8& s, const CyclicWeightData& d) {
  const auto [a, e, f, g, b, c, dd, h] = s;
  cplx sum = 0.0;
  for (int n = 0; n < d.N; ++n)
    sum += rootPower(d.N, 2LL * n * (b + dd - f - h)) * d.phiAt(0, n - h + c) * d.phiAt(1, n - f + a) /
           (d.phiAt(2, n - b + g) * d.phiAt(3, n - dd + e));
  return sum;
}

TetraAngles tetraAnglesFromNormals(const std::array<Eigen::Vector3d, 4>& normals) {
  Eigen::Matrix<double, 3, 4> Nm;
  for (int i = 0; i < 4; ++i) {
    double len = normals[i].norm();
    if (len < 1e-12) throw DegeneracyError("tetraAnglesFromNormals: zero normal", 0);
    Nm.col(i) = normals[i] / len;
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (Nm.col(i).cross(Nm.col(j)).norm() < 1e-6)
        throw DegeneracyError("tetraAnglesFromNormals: parallel normals", 0);
  // closing relation sum w_i n_i = 0 fixes the outward orientation
  Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(Nm, Eigen::ComputeFullV);
  Eigen::Vector4d w = svd.matrixV().col(3);
  TetraAngles t;
  for (int i = 0; i < 4; ++i) {
    if (std::abs(w(i)) < 1e-9) throw DegeneracyError("tetraAnglesFromNormals: normals not in general position", 0);
    t.normals[i] = (w(i) > 0 ? 1.0 : -1.0) * Nm.col(i);
  }
  const int pairs[6][2] = {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3}};
  for (int k = 0; k < 6; ++k) {
    double c = -t.normals[pairs[k][0]].dot(t.normals[pairs[k][1]]);
    t.theta[k] = std::acos(std::clamp(c, -1.0, 1.0));
  }
  return t;
}

TetraAngles regularTetrahedron() {
  std::array<Eigen::Vector3d, 4> n = {Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(1, -1, -1), Eigen::Vector3d(-1, 1, -1),
                                      Eigen::Vector3d(-1, -1, 1)};
  return tetraAnglesFromNormals(n);
}

std::array<std::array<double, 3>, 4> vertexTriples(const TetraAngles& t) {
  const auto& th = t.theta;
  return {{{th[0], th[1], th[2]},
           {th[0], M_PI - th[3], M_PI - th[4]},
           {M_PI - th[1], M_PI - th[3], th[5]},
           {th[2], th[4], th[5]}}};
}

TEResult cyclicIrcTECheck(const std::array<CyclicWeightData, 4>& W, const Spins14& sp) {
  const auto [a1, a2, a3, a4, b1, b2, b3, b4, c1, c2, c3, c4, c5, c6] = sp;
  const int N = W[0].N;
  TEResult r;
  for (int z = 0; z < N; ++z) {
    r.lhs += ircWeightCyclic({a4, c1, c3, c2, b3, b2, b1, z}, W[0]) * ircWeightCyclic({c1, a3, b1, b2, z, c6, c4, b4}, W[1]) *
             ircWeightCyclic({b1, c4, c3, z, b3, b4, a2, c5}, W[2]) * ircWeightCyclic({z, b4, b3, b2, c2, c6, c5, a1}, W[3]);
    r.rhs += ircWeightCyclic({b1, c4, c3, c1, a4, a3, a2, z}, W[3]) * ircWeightCyclic({c1, a3, a4, b2, c2, c6, z, a1}, W[2]) *
             ircWeightCyclic({a4, z, c3, c2, b3, a1, a2, c5}, W[1]) * ircWeightCyclic({z, a3, a2, a1, c5, c6, c4, b4}, W[0]);
    r.terms += 2;
  }
  r.residual = relativeResidual(r.lhs, r.rhs);
  return r;
}

TEResult cyclicVertexTECheck(const std::array<CyclicWeightData, 4>& R, const std::array<int, 6>& in,
                             const std::array<int, 6>& out) {
  const int N = R[0].N;
  const auto [n1, n2, n3, n4, n5, n6] = in;
  const auto [a1, a2, a3, a4, a5, a6] = out;
  auto E = [&](int w, int x, int y, int z, int u, int v, int t) {
    return cyclicVertexElement({x, y, z}, {u, v, t}, R[w]);
  };
  TEResult r;
  for (int p2 = 0; p2 < N; ++p2) {
    int p1 = mod(n1 + n2 - p2, N), p3 = mod(n2 + n3 - p2, N);
    int p4 = mod(p1 + n4 - a1, N), p5 = mod(n4 + n5 - p4, N), p6 = mod(p4 + n6 - a4, N);
    r.lhs += E(0, n1, n2, n3, p1, p2, p3) * E(1, p1, n4, n5, a1, p4, p5) * E(2, p2, p4, n6, a2, a4, p6) *
             E(3, p3, p5, p6, a3, a5, a6);
  }
  for (int p5 = 0; p5 < N; ++p5) {
    int p3 = mod(n3 + n5 - p5, N), p6 = mod(n5 + n6 - p5, N);
    int p4 = mod(n4 + p6 - a6, N), p2 = mod(n2 + n4 - p4, N), p1 = mod(n1 + p4 - a4, N);
    r.rhs += E(3, n3, n5, n6, p3, p5, p6) * E(2, n2, n4, p6, p2, p4, a6) * E(1, n1, p4, p5, p1, a4, a5) *
             E(0, p1, p2, p3, a1, a2, a3);
  }
  r.terms = 2 * N;
  r.residual = relativeResidual(r.lhs, r.rhs);
  return r;
}

CrossFormResult cyclicCrossForm(const Spins8& s, const CyclicWeightData& d) {
  const auto [a, e, f, g, b, c, dd, h] = s;
  const int n1 = g + f - a - b, n2 = a + c - e - g, n3 = e + f - a - dd;
  const int m1 = c + dd - e - h, m2 = f + h - b - dd, m3 = b + c - g - h;
  CrossFormResult r;
  r.vertex = cyclicVertexElement({n1, n2, n3}, {m1, m2, m3}, d);
  r.weight = ircWeightCyclic(s, d);
  r.phase = rootPower(d.N, static_cast<long long>(n1) * n3 - static_cast<long long>(m2) * (n1 + n3) +
                               2LL * (f - a) * m2);
  r.residual = relativeResidual(r.vertex, r.phase * r.weight);
  return r;
}

}  // namespace qgeo
