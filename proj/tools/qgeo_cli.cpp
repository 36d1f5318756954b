#include "qgeo/errors.hpp"
#include "qgeo/geometry.hpp"
#include "qgeo/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <regex>

using namespace qgeo;

namespace {

struct Overrides {
  std::string config;
  std::optional<double> q, bMod, bArg, tol;
  std::optional<int> N, samples, workers, cutoff, maxIndex;
  std::optional<std::uint64_t> seed;
  bool negative = false, full = false;
};

void addConfigFlags(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "JSON config file; flags override its values")->check(CLI::ExistingFile);
  app->add_option("--q", o.q, "Fock deformation parameter");
  app->add_option("--b-mod", o.bMod, "modulus of the modular parameter b");
  app->add_option("--b-arg", o.bArg, "argument of b in radians");
  app->add_option("--N", o.N, "cyclic representation size");
  app->add_option("--seed", o.seed, "64-bit seed");
  app->add_option("--samples", o.samples, "number of cases");
  app->add_option("--tol", o.tol, "pass tolerance");
  app->add_option("--workers", o.workers, "worker threads");
  app->add_option("--cutoff", o.cutoff, "Fock truncation dimension");
  app->add_option("--max-index", o.maxIndex, "largest Fock index in the tetrahedron check");
  app->add_flag("--negative", o.negative, "run with a perturbed map or weight; passes when the residual is large");
  app->add_flag("--full", o.full, "include every case residual in the report");
}

SuiteConfig buildConfig(const std::string& suite, const Overrides& o) {
  SuiteConfig c;
  if (!o.config.empty()) c = configFromJsonFile(o.config, c);
  c.suite = suite;
  if (o.q) c.q = *o.q;
  if (o.bMod) c.bMod = *o.bMod;
  if (o.bArg) c.bArg = *o.bArg;
  if (o.N) c.N = *o.N;
  if (o.seed) c.seed = *o.seed;
  if (o.samples) c.samples = *o.samples;
  if (o.tol) c.tol = *o.tol;
  if (o.workers) c.workers = *o.workers;
  if (o.cutoff) c.cutoff = *o.cutoff;
  if (o.maxIndex) c.maxIndex = *o.maxIndex;
  if (o.negative) c.negativeControl = true;
  if (o.full) c.fullResiduals = true;
  return c;
}

Vertex parseSize(const std::string& s) {
  static const std::regex re(R"((\d+)x(\d+)x(\d+))");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw ConfigError("size must look like AxBxC, got '" + s + "'");
  Vertex v{std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3])};
  for (int x : v)
    if (x < 1) throw ConfigError("size components must be positive");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for tetrahedron equation solutions"};
  app.require_subcommand(1);

  Overrides o;
  std::vector<std::string> suites;
  std::string out;
  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("suites", suites, "suite ids, or 'all'")->required();
  verify->add_option("--out", out, "write the JSON report here");
  addConfigFlags(verify, o);

  std::string size = "3x3x3", mode = "circular", meshOut = "mesh.obj";
  std::uint64_t meshSeed = 1;
  auto* evolve = app.add_subcommand("evolve", "evolve a lattice from random initial data and export it");
  evolve->add_option("--size", size, "box size AxBxC");
  evolve->add_option("--mode", mode, "circular or quadrilateral")->check(CLI::IsMember({"circular", "quadrilateral"}));
  evolve->add_option("--seed", meshSeed, "seed for the initial data");
  evolve->add_option("--out", meshOut, "OBJ output path");

  std::string reportPath;
  auto* report = app.add_subcommand("report", "summarize a JSON report");
  report->add_option("--json", reportPath, "report file")->required()->check(CLI::ExistingFile);

  app.add_subcommand("list", "list suite ids");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list")) {
      for (const auto& s : availableSuites()) std::cout << s << "\n";
      return 0;
    }
    if (verify->parsed()) {
      if (suites.size() == 1 && suites[0] == "all") suites = availableSuites();
      std::vector<Report> reports;
      bool all = true;
      for (const auto& s : suites) {
        SuiteConfig cfg = buildConfig(s, o);
        if (!out.empty()) cfg.out = out;
        Report r = runSuite(cfg);
        std::printf("%-18s %-16s %s  max residual %.3e  tol %.1e  cases %zu  %.2fs\n", r.suite.c_str(), r.mode.c_str(),
                    r.pass ? "PASS" : "FAIL", r.maxResidual, r.tolerance, r.cases.size(), r.wallSeconds);
        if (!r.pass && r.worstCase >= 0) std::printf("  worst case %d: %s\n", r.worstCase, r.cases[r.worstCase].inputs.c_str());
        all = all && r.pass;
        reports.push_back(std::move(r));
      }
      std::string target = out.empty() ? (o.config.empty() ? "" : buildConfig(suites[0], o).out) : out;
      if (!target.empty()) writeReports(reports, target);
      return all ? 0 : 1;
    }
    if (evolve->parsed()) {
      Vertex ext = parseSize(size);
      std::mt19937_64 rng(meshSeed);
      LatticeState st;
      if (mode == "circular") {
        st = makeCircularInitialData(ext, rng);
      } else {
        std::uniform_real_distribution<double> u(-0.2, 0.2);
        Eigen::MatrixXd A = Eigen::MatrixXd::Identity(3, 3);
        for (int i = 0; i < 9; ++i) A(i / 3, i % 3) += u(rng);
        st = makeAffineInitialData(ext, A, Eigen::VectorXd::Zero(3));
      }
      st = evolveAll(st);
      LatticeResiduals lr = latticeResiduals(st);
      exportMesh(st, meshOut);
      std::printf("cubes %d faces %d  planarity %.2e  concyclicity %.2e  cosphericity %.2e\n", lr.cubes,
                  static_cast<int>(meshFromLattice(st).faces.size()), lr.planarity, lr.concyclicity, lr.cosphericity);
      return 0;
    }
    if (report->parsed()) {
      bool all = true;
      for (const auto& r : readReports(reportPath)) {
        std::printf("%-18s %-16s %s  max residual %.3e  tol %.1e\n", r.suite.c_str(), r.mode.c_str(),
                    r.pass ? "PASS" : "FAIL", r.maxResidual, r.tolerance);
        all = all && r.pass;
      }
      return all ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
