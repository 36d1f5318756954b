#include "qgeo/classical_map.hpp"

#include <random>
#include <sstream>

namespace qgeo {

namespace {

Site shift(Site m, int dir, int by) {
  m[dir - 1] += by;
  return m;
}

std::string show(const Site& m) {
  std::ostringstream os;
  os << "(" << m[0] << "," << m[1] << "," << m[2] << ")";
  return os.str();
}

}  // namespace

bool CovariantField::has(int i, int j, const Site& m) const {
  auto it = A.find({i, j});
  return it != A.end() && it->second.count(m) != 0;
}

double CovariantField::get(int i, int j, const Site& m) const {
  auto it = A.find({i, j});
  if (it == A.end()) throw PreconditionError("covariant field: no component");
  auto s = it->second.find(m);
  if (s == it->second.end()) throw PreconditionError("covariant field: A" + std::to_string(i) + std::to_string(j) + " unset at " + show(m));
  return s->second;
}

double CovariantField::K(int i, int j, const Site& m) const {
  double r = 1.0 - get(i, j, m) * get(j, i, m);
  if (r < 0) throw BranchError("covariant field: 1 - A A* < 0 at " + show(m));
  return std::sqrt(r);
}

// Face with normal 1 carries (A32, A23), normal 2 carries (A31, A13),
// normal 3 carries (A21, A12). The normal-2 face in front of cube m sits at
// m - e2, the back one at m.
CovariantField makeCovariantBoundary(const Site& extent, double amplitude, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  CovariantField f;
  for (int a = 0; a < extent[0]; ++a)
    for (int b = 0; b < extent[1]; ++b)
      for (int c = 0; c < extent[2]; ++c) {
        Site m{a, b, c};
        if (a == 0) f.set(3, 2, m, u(rng)), f.set(2, 3, m, u(rng));
        if (c == 0) f.set(2, 1, m, u(rng)), f.set(1, 2, m, u(rng));
        if (b == 0) {
          Site s = shift(m, 2, -1);
          f.set(3, 1, s, u(rng)), f.set(1, 3, s, u(rng));
        }
      }
  return f;
}

void covariantStep(CovariantField& f, int k, const std::vector<Site>& region) {
  for (const Site& m : region) {
    try {
      if (k == 2) {
        // inverted shift: A_31(m) = K32 K21 A_31(m - e2) + A32 A21
        Site s = shift(m, 2, -1);
        double K32 = f.K(3, 2, m), K21 = f.K(2, 1, m);
        f.set(3, 1, m, K32 * K21 * f.get(3, 1, s) + f.get(3, 2, m) * f.get(2, 1, m));
        f.set(1, 3, m, K32 * K21 * f.get(1, 3, s) + f.get(1, 2, m) * f.get(2, 3, m));
      } else if (k == 1) {
        double d = f.K(3, 1, m) * f.K(1, 2, m);
        if (d == 0) throw SingularityError("covariant step: vanishing K at " + show(m));
        Site t = shift(m, 1, 1);
        f.set(3, 2, t, (f.get(3, 2, m) - f.get(3, 1, m) * f.get(1, 2, m)) / d);
        f.set(2, 3, t, (f.get(2, 3, m) - f.get(2, 1, m) * f.get(1, 3, m)) / d);
      } else if (k == 3) {
        double d = f.K(2, 3, m) * f.K(3, 1, m);
        if (d == 0) throw SingularityError("covariant step: vanishing K at " + show(m));
        Site t = shift(m, 3, 1);
        f.set(2, 1, t, (f.get(2, 1, m) - f.get(2, 3, m) * f.get(3, 1, m)) / d);
        f.set(1, 2, t, (f.get(1, 2, m) - f.get(1, 3, m) * f.get(3, 2, m)) / d);
      } else {
        throw PreconditionError("covariant step: direction must be 1, 2 or 3");
      }
    } catch (const BranchError& e) {
      throw BranchError(std::string(e.what()) + " (cube " + show(m) + ")");
    }
  }
}

void covariantEvolve(CovariantField& f, const Site& extent) {
  int maxSum = extent[0] + extent[1] + extent[2] - 3;
  for (int s = 0; s <= maxSum; ++s) {
    std::vector<Site> layer;
    for (int a = 0; a < extent[0]; ++a)
      for (int b = 0; b < extent[1]; ++b) {
        int c = s - a - b;
        if (c >= 0 && c < extent[2]) layer.push_back({a, b, c});
      }
    covariantStep(f, 2, layer);
    covariantStep(f, 1, layer);
    covariantStep(f, 3, layer);
  }
}

Triple3<double> cubeFrontTriples(const CovariantField& f, const Site& m) {
  Site s = shift(m, 2, -1);
  return {Triple{f.K(3, 2, m), f.get(3, 2, m), f.get(2, 3, m)}, Triple{f.K(3, 1, s), f.get(3, 1, s), f.get(1, 3, s)},
          Triple{f.K(2, 1, m), f.get(2, 1, m), f.get(1, 2, m)}};
}

Triple3<double> cubeBackTriples(const CovariantField& f, const Site& m) {
  Site t1 = shift(m, 1, 1), t3 = shift(m, 3, 1);
  return {Triple{f.K(3, 2, t1), f.get(3, 2, t1), f.get(2, 3, t1)}, Triple{f.K(3, 1, m), f.get(3, 1, m), f.get(1, 3, m)},
          Triple{f.K(2, 1, t3), f.get(2, 1, t3), f.get(1, 2, t3)}};
}

CovariantReport covariantCheck(const CovariantField& f, const Site& extent) {
  CovariantReport r;
  for (int a = 0; a < extent[0]; ++a)
    for (int b = 0; b < extent[1]; ++b)
      for (int c = 0; c < extent[2]; ++c) {
        Site m{a, b, c};
        Triple3<double> fr = cubeFrontTriples(f, m), bk = cubeBackTriples(f, m);
        // K relations across the cube
        double k1 = fr[0].k, k2 = fr[1].k, k3 = fr[2].k, k1p = bk[0].k, k2p = bk[1].k, k3p = bk[2].k;
        r.kkResidual = std::max({r.kkResidual, std::abs(k1p * k2p - k1 * k2), std::abs(k3p * k2p - k3 * k2),
                                 std::abs(k1p * k3 - k3p * k1)});
        Triple3<double> mp = mapR123(fr, +1);
        for (int j = 0; j < 3; ++j)
          r.mapResidual = std::max({r.mapResidual, std::abs(mp[j].k - bk[j].k), std::abs(mp[j].a - bk[j].a),
                                    std::abs(mp[j].aStar - bk[j].aStar)});
        ++r.cubes;
      }
  return r;
}

}  // namespace qgeo
