#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgeo/errors.hpp"
#include "qgeo/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

using namespace qgeo;

namespace {

std::string tempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("qgeo_test_" + name)).string();
}

SuiteConfig quick(const std::string& suite, int samples) {
  SuiteConfig c;
  c.suite = suite;
  c.samples = samples;
  c.seed = 42;
  return c;
}

std::vector<double> residuals(const Report& r) {
  std::vector<double> v;
  for (const auto& c : r.cases) v.push_back(c.residual);
  std::sort(v.begin(), v.end());
  return v;
}

// Faces of an a x b x c box counted one unit square at a time.
int bruteForceFaces(const Vertex& e) {
  std::set<std::array<int, 4>> faces;
  for (int x = 0; x < e[0]; ++x)
    for (int y = 0; y < e[1]; ++y)
      for (int z = 0; z < e[2]; ++z)
        for (int dir = 0; dir < 3; ++dir)
          for (int side = 0; side < 2; ++side) {
            std::array<int, 3> p{x, y, z};
            p[dir] += side;
            faces.insert({dir, p[0], p[1], p[2]});
          }
  return static_cast<int>(faces.size());
}

}  // namespace

TEST_CASE("per-case random streams") {
  auto a = caseRng(7, 3), b = caseRng(7, 3), c = caseRng(7, 4), d = caseRng(8, 3);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
}

TEST_CASE("suite list and defaults") {
  const auto& s = availableSuites();
  CHECK(s.size() == 14);
  CHECK(std::find(s.begin(), s.end(), "modular-te-irc") != s.end());
  CHECK(defaultTolerance("classical-lybe") == 1e-12);
  CHECK(defaultTolerance("modular-te-irc") == 1e-4);
  SuiteConfig c;
  c.maxIndex = 2;
  CHECK(defaultSamples("fock-te", c) == 729);
}

TEST_CASE("config validation") {
  SuiteConfig c = quick("nonsense", 1);
  CHECK_THROWS_WITH_AS(runSuite(c), doctest::Contains("classical-fte"), ConfigError);
  c = quick("classical-lybe", 1);
  c.tol = -2.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = quick("classical-lybe", 1);
  c.N = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = quick("classical-lybe", 1);
  c.workers = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = quick("fock-te", 1);
  c.q = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = quick("cyclic-intertwine", 1);
  c.N = 4;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config files") {
  const std::string path = tempPath("config.json");
  {
    std::ofstream f(path);
    f << R"({"suite": "miquel", "samples": 4, "seed": 9, "tol": 1e-9})";
  }
  SuiteConfig c = configFromJsonFile(path);
  CHECK(c.suite == "miquel");
  CHECK(c.samples == 4);
  CHECK(c.seed == 9);
  {
    std::ofstream f(path);
    f << R"({"suite": "miquel", "sample": 4})";
  }
  CHECK_THROWS_WITH_AS(configFromJsonFile(path), doctest::Contains("sample"), ConfigError);
  {
    std::ofstream f(path);
    f << R"({"suite": "miquel", "samples": "four"})";
  }
  CHECK_THROWS_AS(configFromJsonFile(path), ConfigError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(configFromJsonFile(path), ConfigError);
}

TEST_CASE("reports are reproducible") {
  SuiteConfig c = quick("classical-fte", 12);
  c.fullResiduals = true;
  Report a = runSuite(c), b = runSuite(c);
  CHECK(a.pass);
  CHECK(reportToJson(a, false) == reportToJson(b, false));
  c.workers = 3;
  Report p = runSuite(c);
  CHECK(residuals(p) == residuals(a));
  c.workers = 1;
  c.seed = 43;
  CHECK(residuals(runSuite(c)) != residuals(a));
}

TEST_CASE("pass means max residual below tolerance") {
  SuiteConfig c = quick("classical-lybe", 10);
  Report r = runSuite(c);
  CHECK(r.pass == (r.maxResidual < r.tolerance));
  CHECK(r.worstCase >= 0);
  CHECK(r.cases[r.worstCase].residual == r.maxResidual);
  c.tol = 1e-30;
  Report f = runSuite(c);
  CHECK_FALSE(f.pass);
  c.tol = -1.0;
  c.negativeControl = true;
  Report n = runSuite(c);
  CHECK(n.mode == "negative-control");
  CHECK(n.pass);
  CHECK(n.maxResidual > c.controlThreshold);
}

TEST_CASE("report files round trip") {
  const std::string path = tempPath("report.json");
  std::vector<Report> rs = {runSuite(quick("miquel", 3)), runSuite(quick("classical-lybe", 3))};
  writeReports(rs, path);
  auto back = readReports(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].suite == "miquel");
  CHECK(back[1].maxResidual == rs[1].maxResidual);
  CHECK(back[1].pass == rs[1].pass);
  std::remove(path.c_str());
}

TEST_CASE("mesh of a single cube") {
  std::mt19937_64 rng(1);
  LatticeState st = evolveAll(makeCircularInitialData({1, 1, 1}, rng));
  QuadMesh m = meshFromLattice(st);
  CHECK(m.vertices.size() == 8);
  CHECK(m.faces.size() == 6);
  CHECK(latticeFaceCount({1, 1, 1}) == 6);
}

TEST_CASE("mesh of an evolved 3x3x3 lattice") {
  // this seed needs the arc fallback for one initial face
  std::mt19937_64 rng(2);
  LatticeState st = evolveAll(makeCircularInitialData({3, 3, 3}, rng));
  QuadMesh m = meshFromLattice(st);
  CHECK(m.vertices.size() == 64);
  CHECK(static_cast<int>(m.faces.size()) == bruteForceFaces({3, 3, 3}));
  CHECK(latticeFaceCount({3, 3, 3}) == 108);
  CHECK(latticeFaceCount({2, 3, 4}) == bruteForceFaces({2, 3, 4}));
  // each face has four distinct vertices
  for (const auto& f : m.faces) {
    std::set<int> ids(f.begin(), f.end());
    CHECK(ids.size() == 4);
  }
  const std::string path = tempPath("mesh.obj");
  exportMesh(st, path);
  QuadMesh r = importMesh(path);
  REQUIRE(r.vertices.size() == m.vertices.size());
  CHECK(r.faces == m.faces);
  double worst = 0.0;
  for (size_t i = 0; i < m.vertices.size(); ++i) worst = std::max(worst, (r.vertices[i] - m.vertices[i]).norm());
  CHECK(worst < 1e-12);
  std::remove(path.c_str());
}

TEST_CASE("mesh export needs a completed cube") {
  std::mt19937_64 rng(3);
  LatticeState st = makeCircularInitialData({2, 2, 2}, rng);
  CHECK_THROWS_AS(meshFromLattice(st), PreconditionError);
  CHECK_THROWS_AS(exportMesh(st, tempPath("never.obj")), PreconditionError);
}
