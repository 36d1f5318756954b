#include "qgeo/errors.hpp"
#include "qgeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qgeo {

namespace {

Vertex add(Vertex v, int dx, int dy, int dz) { return {v[0] + dx, v[1] + dy, v[2] + dz}; }

std::string show(const Vertex& v) {
  std::ostringstream os;
  os << "(" << v[0] << "," << v[1] << "," << v[2] << ")";
  return os.str();
}

}  // namespace

const Point& LatticeState::at(const Vertex& v) const {
  auto it = vertexMap.find(v);
  if (it == vertexMap.end()) throw PreconditionError("lattice vertex " + show(v) + " is unknown");
  return it->second;
}

Hexahedron LatticeState::cube(const Vertex& m) const {
  return {at(m), at(add(m, 1, 0, 0)), at(add(m, 0, 1, 0)), at(add(m, 0, 0, 1)), at(add(m, 1, 1, 0)),
          at(add(m, 1, 0, 1)), at(add(m, 0, 1, 1)), at(add(m, 1, 1, 1))};
}

void LatticeState::refreshFrontier() {
  frontier.clear();
  for (int i = 0; i < extent[0]; ++i)
    for (int j = 0; j < extent[1]; ++j)
      for (int k = 0; k < extent[2]; ++k) {
        Vertex m{i, j, k};
        if (has(add(m, 1, 1, 1))) continue;
        if (has(m) && has(add(m, 1, 0, 0)) && has(add(m, 0, 1, 0)) && has(add(m, 0, 0, 1)) &&
            has(add(m, 1, 1, 0)) && has(add(m, 1, 0, 1)) && has(add(m, 0, 1, 1)))
          frontier.insert(m);
      }
}

std::vector<Vertex> LatticeState::completedCubes() const {
  std::vector<Vertex> out;
  for (int i = 0; i < extent[0]; ++i)
    for (int j = 0; j < extent[1]; ++j)
      for (int k = 0; k < extent[2]; ++k) {
        Vertex m{i, j, k};
        bool all = true;
        for (int s = 0; s < 8 && all; ++s) all = has(add(m, s & 1, (s >> 1) & 1, (s >> 2) & 1));
        if (all) out.push_back(m);
      }
  return out;
}

LatticeState makeAffineInitialData(const Vertex& extent, const Eigen::MatrixXd& A, const Eigen::VectorXd& t) {
  LatticeState st;
  st.extent = extent;
  st.mode = LatticeMode::Quadrilateral;
  for (int i = 0; i <= extent[0]; ++i)
    for (int j = 0; j <= extent[1]; ++j)
      for (int k = 0; k <= extent[2]; ++k) {
        if (i != 0 && j != 0 && k != 0) continue;
        Eigen::Vector3d m(i, j, k);
        st.vertexMap[{i, j, k}] = A * m + t;
      }
  st.refreshFrontier();
  return st;
}

LatticeState makeCircularInitialData(const Vertex& extent, std::mt19937_64& rng, double noise) {
  std::normal_distribution<double> g(0.0, 1.0);
  auto jitter = [&](double s) {
    Point p(3);
    p << g(rng), g(rng), g(rng);
    return Point(s * p);
  };
  LatticeState st;
  st.extent = extent;
  st.mode = LatticeMode::Circular;
  st.vertexMap[{0, 0, 0}] = Point::Zero(3);
  for (int ax = 0; ax < 3; ++ax)
    for (int n = 1; n <= extent[ax]; ++n) {
      Vertex v{0, 0, 0}, prev{0, 0, 0};
      v[ax] = n;
      prev[ax] = n - 1;
      Point step = Point::Zero(3);
      step(ax) = 1.0;
      st.vertexMap[v] = st.at(prev) + step + jitter(noise);
    }
  // fill each coordinate plane face by face; the fourth corner goes on the
  // circle through the other three
  const int planes[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (const auto& pl : planes) {
    int u = pl[0], w = pl[1];
    for (int i = 1; i <= extent[u]; ++i)
      for (int j = 1; j <= extent[w]; ++j) {
        Vertex v{0, 0, 0}, vu{0, 0, 0}, vw{0, 0, 0}, vb{0, 0, 0};
        v[u] = i, v[w] = j;
        vu[u] = i - 1, vu[w] = j;
        vw[u] = i, vw[w] = j - 1;
        vb[u] = i - 1, vb[w] = j - 1;
        const Point &pb = st.at(vb), &pu = st.at(vu), &pw = st.at(vw);
        bool placed = false;
        for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
          double s = noise * std::pow(0.9, attempt / 10);
          Point cand = projectOntoCircle(pb, pw, pu, pw + pu - pb + jitter(s));
          if (isConvexQuad({pb, pw, cand, pu})) {
            st.vertexMap[v] = cand;
            placed = true;
          }
        }
        if (!placed) {
          // far along the chord bisector, away from pb: lands on the arc that keeps the quad convex
          Point chord = pu - pw, mid = 0.5 * (pu + pw), away = mid - pb;
          away -= away.dot(chord) / chord.squaredNorm() * chord;
          Point cand = projectOntoCircle(pb, pw, pu, mid + 1e6 * chord.norm() * away.normalized());
          if (isConvexQuad({pb, pw, cand, pu})) {
            st.vertexMap[v] = cand;
            placed = true;
          }
        }
        if (!placed) throw DegeneracyError("circular initial data: no convex face at " + show(v), 0);
      }
  }
  st.refreshFrontier();
  return st;
}

LatticeState staircaseEvolve(const LatticeState& state, int steps) {
  LatticeState st = state;
  for (int s = 0; s < steps && !st.frontier.empty(); ++s) {
    auto best = st.frontier.begin();
    int bestSum = (*best)[0] + (*best)[1] + (*best)[2];
    for (auto it = st.frontier.begin(); it != st.frontier.end(); ++it) {
      int sum = (*it)[0] + (*it)[1] + (*it)[2];
      if (sum < bestSum) best = it, bestSum = sum;
    }
    Vertex m = *best;
    Point x123;
    try {
      x123 = hexFlip(st.at(m), st.at(add(m, 1, 0, 0)), st.at(add(m, 0, 1, 0)), st.at(add(m, 0, 0, 1)),
                     st.at(add(m, 1, 1, 0)), st.at(add(m, 1, 0, 1)), st.at(add(m, 0, 1, 1)));
    } catch (const DegeneracyError& e) {
      throw DegeneracyError(std::string(e.what()) + " at cube " + show(m), e.estimate);
    }
    Vertex top = add(m, 1, 1, 1);
    st.vertexMap[top] = x123;
    st.frontier.erase(m);
    // the new vertex can complete the seven-corner set of cubes around it
    for (int d = 0; d < 8; ++d) {
      Vertex c = add(top, -(d & 1), -((d >> 1) & 1), -((d >> 2) & 1));
      bool inside = true;
      for (int i = 0; i < 3; ++i) inside = inside && c[i] >= 0 && c[i] < st.extent[i];
      if (!inside || st.has(add(c, 1, 1, 1))) continue;
      bool ready = st.has(c) && st.has(add(c, 1, 0, 0)) && st.has(add(c, 0, 1, 0)) && st.has(add(c, 0, 0, 1)) &&
                   st.has(add(c, 1, 1, 0)) && st.has(add(c, 1, 0, 1)) && st.has(add(c, 0, 1, 1));
      if (ready) st.frontier.insert(c);
    }
  }
  return st;
}

LatticeState evolveAll(const LatticeState& state) {
  int total = state.extent[0] * state.extent[1] * state.extent[2];
  return staircaseEvolve(state, total);
}

LatticeResiduals latticeResiduals(const LatticeState& state) {
  LatticeResiduals r;
  for (const Vertex& m : state.completedCubes()) {
    Hexahedron h = state.cube(m);
    ++r.cubes;
    for (const auto& f : h.faces()) {
      std::vector<Point> q(f.begin(), f.end());
      r.planarity = std::max(r.planarity, planarityResidual(q));
      if (state.mode == LatticeMode::Circular) r.concyclicity = std::max(r.concyclicity, concyclicityResidual(q));
      ++r.faces;
    }
    if (state.mode == LatticeMode::Circular) {
      auto v = h.vertices();
      r.cosphericity = std::max(r.cosphericity, cosphericityResidual(std::vector<Point>(v.begin(), v.end())));
    }
  }
  return r;
}

namespace {

int pairIndex(int i, int j) {
  if (i > j) std::swap(i, j);
  static const int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return table[i][j];
}

}  // namespace

DodecahedronReport dodecahedronConsistency(const FourCubeData& d, const FlipFn& flip) {
  DodecahedronReport rep;
  const int triples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  auto xij = [&](int i, int j) -> const Point& { return d.xij[pairIndex(i, j)]; };
  auto tripleIndex = [&](int i, int j, int k) {
    for (int t = 0; t < 4; ++t) {
      std::array<int, 3> a{i, j, k};
      std::sort(a.begin(), a.end());
      if (a[0] == triples[t][0] && a[1] == triples[t][1] && a[2] == triples[t][2]) return t;
    }
    return -1;
  };
  for (int t = 0; t < 4; ++t) {
    int i = triples[t][0], j = triples[t][1], k = triples[t][2];
    rep.xijk[t] = flip(d.x0, d.xi[i], d.xi[j], d.xi[k], xij(i, j), xij(i, k), xij(j, k));
  }
  double diam = 0;
  std::vector<Point> all = {d.x0};
  for (const auto& p : d.xi) all.push_back(p);
  for (const auto& p : d.xij) all.push_back(p);
  for (const auto& p : all)
    for (const auto& q : all) diam = std::max(diam, (p - q).norm());
  // cube based at x_i spanned by the other three directions
  for (int i = 0; i < 4; ++i) {
    int o[3], n = 0;
    for (int j = 0; j < 4; ++j)
      if (j != i) o[n++] = j;
    rep.x1234[i] = flip(d.xi[i], xij(i, o[0]), xij(i, o[1]), xij(i, o[2]), rep.xijk[tripleIndex(i, o[0], o[1])],
                           rep.xijk[tripleIndex(i, o[0], o[2])], rep.xijk[tripleIndex(i, o[1], o[2])]);
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      rep.discrepancy = std::max(rep.discrepancy, (rep.x1234[i] - rep.x1234[j]).norm() / diam);
  return rep;
}

FourCubeData randomFourCube(std::mt19937_64& rng, bool circular, double noise) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto jitter = [&](double s) {
    Point p(4);
    p << g(rng), g(rng), g(rng), g(rng);
    return Point(s * p);
  };
  FourCubeData d;
  d.x0 = jitter(noise);
  for (int i = 0; i < 4; ++i) {
    Point e = Point::Zero(4);
    e(i) = 1.0;
    d.xi[i] = d.x0 + e + jitter(noise);
  }
  int n = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j, ++n) {
      const Point &a = d.xi[i], &b = d.xi[j];
      if (circular) {
        d.xij[n] = projectOntoCircle(d.x0, a, b, a + b - d.x0 + jitter(noise));
      } else {
        double s = 1.0 + noise * u(rng), t = 1.0 + noise * u(rng);
        d.xij[n] = d.x0 + s * (a - d.x0) + t * (b - d.x0);
      }
    }
  return d;
}

}  // namespace qgeo
