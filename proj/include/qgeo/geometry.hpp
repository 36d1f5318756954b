#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace qgeo {

using Point = Eigen::VectorXd;

struct FaceAngles {
  double alpha = 0, beta = 0, gamma = 0, delta = 0;
  bool reflex = false;
  double sum() const { return alpha + beta + gamma + delta; }
};

// Corners of a face listed by angle label. Going around the face the
// cyclic order is alpha, beta, delta, gamma.
struct LabeledQuad {
  Point alpha, beta, gamma, delta;
};

struct Hexahedron {
  Point x0, x1, x2, x3, x12, x13, x23, x123;

  std::array<Point, 8> vertices() const { return {x0, x1, x2, x3, x12, x13, x23, x123}; }
  // Six faces as cyclically ordered corner quadruples: the three through x0
  // (normals 1, 2, 3) followed by the three through x123.
  std::array<std::array<Point, 4>, 6> faces() const;

  // Faces labeled per the front/back convention used by the angle map.
  std::array<LabeledQuad, 3> frontLabeled() const;
  std::array<LabeledQuad, 3> backLabeled() const;
};

// Returns x123 on the planes (x1,x12,x13), (x2,x12,x23), (x3,x13,x23).
Point hexFlip(const Point& x0, const Point& x1, const Point& x2, const Point& x3, const Point& x12,
              const Point& x13, const Point& x23);
Hexahedron completeHexahedron(const Point& x0, const Point& x1, const Point& x2, const Point& x3,
                              const Point& x12, const Point& x13, const Point& x23);

// Distance from p to the plane through (a, b, c), measured inside their
// common affine hull with `frame` (affine 3-space of the configuration).
double planeResidual(const Point& p, const Point& a, const Point& b, const Point& c);

// Scale-free residuals
double planarityResidual(const std::vector<Point>& pts);    // sigma_min / sigma_max
double concyclicityResidual(const std::vector<Point>& pts); // max |d - R| / R
double cosphericityResidual(const std::vector<Point>& pts); // max |d - R| / R

struct MiquelReport {
  std::array<double, 3> backConcyclicity{};
  double cosphericity = 0;
  double maxResidual() const;
};
MiquelReport miquelCheck(const Hexahedron& hex, double frontTol = 1e-9);

FaceAngles extractAngles(const LabeledQuad& face, double planarTol = 1e-9);

std::array<FaceAngles, 3> frontAngles(const Hexahedron& hex);
std::array<FaceAngles, 3> backAngles(const Hexahedron& hex);

// ---- random configurations --------------------------------------------

// Point on the circle through a, b, c nearest to the target.
Point projectOntoCircle(const Point& a, const Point& b, const Point& c, const Point& target);
// Is the quad (given cyclically) convex inside its plane?
bool isConvexQuad(const std::array<Point, 4>& quad);

// Seven corners of a circular hexahedron with concyclic front faces,
// perturbed from a cube; x123 is left for the flip.
Hexahedron randomCircularHexahedron(std::mt19937_64& rng, double noise = 0.25);

// ---- staircase evolution --------------------------------------------------

using Vertex = std::array<int, 3>;

enum class LatticeMode { Quadrilateral, Circular };

struct LatticeState {
  std::map<Vertex, Point> vertexMap;
  std::set<Vertex> frontier;  // cubes (by base vertex) with seven known corners
  Vertex extent{0, 0, 0};     // cubes span [0, extent) in each direction
  LatticeMode mode = LatticeMode::Quadrilateral;

  bool has(const Vertex& v) const { return vertexMap.count(v) != 0; }
  const Point& at(const Vertex& v) const;
  void refreshFrontier();
  std::vector<Vertex> completedCubes() const;
  Hexahedron cube(const Vertex& m) const;
};

// Initial data on the three coordinate planes from an affine map x = A m + t.
LatticeState makeAffineInitialData(const Vertex& extent, const Eigen::MatrixXd& A,
                                   const Eigen::VectorXd& t);
// Random circular initial data on the three coordinate planes of the box.
LatticeState makeCircularInitialData(const Vertex& extent, std::mt19937_64& rng,
                                     double noise = 0.2);

// Performs up to `steps` flips, lowest m1+m2+m3 first (ties lexicographic).
LatticeState staircaseEvolve(const LatticeState& state, int steps);
LatticeState evolveAll(const LatticeState& state);

struct LatticeResiduals {
  double planarity = 0, concyclicity = 0, cosphericity = 0;
  int cubes = 0, faces = 0;
};
LatticeResiduals latticeResiduals(const LatticeState& state);

// ---- rhombic dodecahedron --------------------------------------------------

// Corners x0, x_i, x_ij of a 4-cube; the six faces at x0 form the front surface.
struct FourCubeData {
  Point x0;
  std::array<Point, 4> xi;
  std::array<Point, 6> xij;  // pairs (0,1),(0,2),(0,3),(1,2),(1,3),(2,3)
};

struct DodecahedronReport {
  std::array<Point, 4> x1234;   // apex from each of the four completions
  std::array<Point, 4> xijk;    // triples (123),(124),(134),(234)
  double discrepancy = 0;       // max pairwise apex distance / diameter
};

using FlipFn = std::function<Point(const Point&, const Point&, const Point&, const Point&, const Point&,
                                   const Point&, const Point&)>;
DodecahedronReport dodecahedronConsistency(const FourCubeData& d, const FlipFn& flip = hexFlip);
FourCubeData randomFourCube(std::mt19937_64& rng, bool circular, double noise = 0.25);

}  // namespace qgeo
