#pragma once

#include "qgeo/geometry.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgeo {

// Unset numeric fields (< 0) take the suite's default.
struct SuiteConfig {
  std::string suite;
  double q = 0.5;
  double bMod = 0.8;
  double bArg = 0.07853981633974483;  // pi / 40
  int N = 3;
  int cutoff = 8;     // Fock truncation M
  int maxIndex = 2;   // Fock tetrahedron check range
  std::uint64_t seed = 1;
  int samples = -1;
  double tol = -1.0;
  int workers = 1;
  bool negativeControl = false;
  double controlThreshold = 1e-3;
  bool fullResiduals = false;
  std::string out;

  void validate() const;
};

struct CaseResult {
  int index = 0;
  double residual = 0.0;
  std::string inputs;
};

struct Report {
  std::string suite;
  std::string mode;  // "verify" or "negative-control"
  SuiteConfig config;
  std::vector<CaseResult> cases;
  double maxResidual = 0.0;
  double meanResidual = 0.0;
  int worstCase = -1;
  double tolerance = 0.0;
  bool pass = false;
  double wallSeconds = 0.0;
};

class SuiteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string>& availableSuites();

// Default sample count and tolerance of a suite.
int defaultSamples(const std::string& suite, const SuiteConfig& cfg);
double defaultTolerance(const std::string& suite);

// Independent stream for case `index`; the same for any worker count.
std::mt19937_64 caseRng(std::uint64_t seed, std::uint64_t index);

Report runSuite(const SuiteConfig& config);

// ---- configuration and reports ------------------------------------------

SuiteConfig configFromJsonFile(const std::string& path, SuiteConfig base = {});
std::string reportToJson(const Report& r, bool includeTiming = true);
std::string reportsToJson(const std::vector<Report>& reports, bool includeTiming = true);
void writeReports(const std::vector<Report>& reports, const std::string& path);

struct ReportSummary {
  std::string suite, mode;
  double maxResidual = 0, tolerance = 0;
  bool pass = false;
};
std::vector<ReportSummary> readReports(const std::string& path);

// ---- mesh export --------------------------------------------------------

struct QuadMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 4>> faces;  // zero-based
};

// Distinct faces of all completed cubes.
QuadMesh meshFromLattice(const LatticeState& state);
int latticeFaceCount(const Vertex& extent);
void exportMesh(const LatticeState& state, const std::string& path);
QuadMesh importMesh(const std::string& path);

}  // namespace qgeo
