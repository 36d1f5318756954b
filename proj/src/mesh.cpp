#include "qgeo/errors.hpp"
#include "qgeo/harness.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qgeo {

QuadMesh meshFromLattice(const LatticeState& state) {
  const auto cubes = state.completedCubes();
  if (cubes.empty()) throw PreconditionError("exportMesh: lattice has no completed cube");
  QuadMesh mesh;
  std::map<Vertex, int> index;
  auto id = [&](const Vertex& v) {
    auto [it, fresh] = index.emplace(v, static_cast<int>(mesh.vertices.size()));
    if (fresh) {
      const Point& p = state.at(v);
      if (p.size() != 3) throw PreconditionError("exportMesh: vertices must lie in R^3");
      mesh.vertices.emplace_back(p(0), p(1), p(2));
    }
    return it->second;
  };
  // face keyed by its lowest corner and normal direction
  std::set<std::pair<Vertex, int>> seen;
  for (const Vertex& m : cubes) {
    for (int dir = 0; dir < 3; ++dir)
      for (int side = 0; side < 2; ++side) {
        Vertex base = m;
        base[dir] += side;
        if (!seen.insert({base, dir}).second) continue;
        int u = (dir + 1) % 3, w = (dir + 2) % 3;
        Vertex a = base, b = base, c = base, d = base;
        b[u] += 1;
        c[u] += 1;
        c[w] += 1;
        d[w] += 1;
        mesh.faces.push_back({id(a), id(b), id(c), id(d)});
      }
  }
  return mesh;
}

int latticeFaceCount(const Vertex& extent) {
  const int a = extent[0], b = extent[1], c = extent[2];
  return (a + 1) * b * c + a * (b + 1) * c + a * b * (c + 1);
}

void exportMesh(const LatticeState& state, const std::string& path) {
  QuadMesh mesh = meshFromLattice(state);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file " + path);
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v(0), v(1), v(2));
    out << buf;
  }
  for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << ' ' << f[3] + 1 << '\n';
  if (!out) throw std::runtime_error("error writing mesh file " + path);
}

QuadMesh importMesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file " + path);
  QuadMesh mesh;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Eigen::Vector3d v;
      if (!(ls >> v(0) >> v(1) >> v(2))) throw std::runtime_error(path + ":" + std::to_string(lineNo) + ": bad vertex");
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::array<int, 4> f;
      for (int& i : f) {
        std::string tok;
        if (!(ls >> tok)) throw std::runtime_error(path + ":" + std::to_string(lineNo) + ": face needs 4 corners");
        i = std::stoi(tok.substr(0, tok.find('/'))) - 1;
        if (i < 0 || i >= static_cast<int>(mesh.vertices.size()))
          throw std::runtime_error(path + ":" + std::to_string(lineNo) + ": face index out of range");
      }
      mesh.faces.push_back(f);
    }
  }
  return mesh;
}

}  // namespace qgeo
