#include "qgeo/classical_map.hpp"
#include "qgeo/errors.hpp"
#include "qgeo/geometry.hpp"
#include "qgeo/harness.hpp"
#include "qgeo/qosc_reps.hpp"
#include "qgeo/rmatrices.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

namespace qgeo {

namespace {

constexpr double kPerturb = 1e-2;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Draws until `f` accepts a sample; rejected samples leave the domain of the
// map or weight under test.
template <class F>
auto resample(F&& f, int maxTries = 500) {
  std::string last;
  for (int t = 0; t < maxTries; ++t) {
    try {
      return f();
    } catch (const DomainError& e) {
      last = e.what();
    } catch (const DegeneracyError& e) {
      last = e.what();
    }
  }
  throw SuiteError("no admissible sample after " + std::to_string(maxTries) + " draws: " + last);
}

struct CaseContext {
  std::mt19937_64 rng;
  int index;
  std::string inputs;
};

using CaseFn = std::function<double(CaseContext&)>;

struct SuitePlan {
  int count = 0;
  CaseFn run;
};

template <class... T>
std::string describe(const T&... xs) {
  std::ostringstream os;
  os.precision(17);
  ((os << xs << ' '), ...);
  std::string s = os.str();
  if (!s.empty()) s.pop_back();
  return s;
}

template <class C>
std::string describeRange(const C& c) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& x : c) {
    os << (first ? "" : " ") << x;
    first = false;
  }
  return os.str();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// ---- classical --------------------------------------------------------------

Triple3<double> suiteMap(const Triple3<double>& t, int eps, bool negative) {
  Triple3<double> r = mapR123(t, eps);
  if (negative) r[1].a *= 1.0 + 5 * kPerturb;
  return r;
}

Triple randomTriple(std::mt19937_64& rng) {
  return anglesToCircular(uniform(rng, 0.2 * M_PI, 0.45 * M_PI), uniform(rng, 0.2 * M_PI, 0.45 * M_PI));
}

std::string describeTriples(const Triple* t, int n) {
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < n; ++i) os << (i ? " " : "") << "(" << t[i].k << "," << t[i].a << "," << t[i].aStar << ")";
  return os.str();
}

SuitePlan planLybe(const SuiteConfig& cfg, int n) {
  return {n, [neg = cfg.negativeControl](CaseContext& c) {
            const int eps = c.index % 2 ? -1 : 1;
            return resample([&] {
              Triple3<double> t = {randomTriple(c.rng), randomTriple(c.rng), randomTriple(c.rng)};
              c.inputs = "eps " + std::to_string(eps) + " " + describeTriples(t.data(), 3);
              return localYangBaxterCheck(t, suiteMap(t, eps, neg), eps);
            });
          }};
}

SuitePlan planFte(const SuiteConfig& cfg, int n) {
  return {n, [neg = cfg.negativeControl](CaseContext& c) {
            const int eps = c.index % 2 ? -1 : 1;
            return resample([&] {
              Triple6<double> s;
              for (auto& x : s) x = randomTriple(c.rng);
              c.inputs = "eps " + std::to_string(eps) + " " + describeTriples(s.data(), 6);
              if (!neg) return functionalTetrahedronCheck(s, eps);
              Triple6<double> l = s, r = s;
              auto apply = [&](Triple6<double>& x, int f) {
                const auto& idx = kFteSlots[f];
                auto out = suiteMap({x[idx[0]], x[idx[1]], x[idx[2]]}, eps, true);
                for (int i = 0; i < 3; ++i) x[idx[i]] = out[i];
              };
              for (int f : {0, 1, 2, 3}) apply(l, f);
              for (int f : {3, 2, 1, 0}) apply(r, f);
              return maxDifference(l, r);
            });
          }};
}

SuitePlan planSymplectic(const SuiteConfig& cfg, int n) {
  return {n, [neg = cfg.negativeControl](CaseContext& c) {
            const int eps = c.index % 2 ? -1 : 1;
            return resample([&] {
              AngleState s;
              for (int j = 0; j < 6; ++j) s(j) = uniform(c.rng, 0.2 * M_PI, 0.45 * M_PI);
              c.inputs = "eps " + std::to_string(eps) + " " + describeRange(s);
              // finite differences near the chart boundary lose accuracy as h^2 / margin^3
              if (angleChartMargin(s, eps) < 0.15) throw DomainError("sample too close to the chart boundary");
              AngleMap map = [eps, neg](const AngleState& x) {
                AngleState y = mapAngles(x, eps);
                if (neg) y(0) *= 1.0 + kPerturb;
                return y;
              };
              return symplecticResidual(map, s, 1e-5);
            });
          }};
}

SuitePlan planGeometryFlip(const SuiteConfig& cfg, int n) {
  return {n, [neg = cfg.negativeControl](CaseContext& c) {
            Hexahedron h = randomCircularHexahedron(c.rng);
            c.inputs = "x0 " + describeRange(h.x0) + " x1 " + describeRange(h.x1) + " x2 " + describeRange(h.x2) +
                       " x3 " + describeRange(h.x3);
            auto fa = frontAngles(h), ba = backAngles(h);
            Triple3<double> t;
            for (int j = 0; j < 3; ++j) t[j] = anglesToCircular(fa[j].alpha, fa[j].beta);
            auto r = suiteMap(t, 1, neg);
            double worst = 0;
            for (int j = 0; j < 3; ++j) {
              auto [a, b] = circularToAngles(r[j]);
              worst = std::max({worst, std::abs(a - ba[j].alpha), std::abs(b - ba[j].beta)});
            }
            return worst;
          }};
}

SuitePlan planMiquel(const SuiteConfig& cfg, int n) {
  return {n, [neg = cfg.negativeControl](CaseContext& c) {
            Hexahedron h = randomCircularHexahedron(c.rng);
            c.inputs = "x0 " + describeRange(h.x0) + " x123 " + describeRange(h.x123);
            if (neg) h.x123 += kPerturb * (h.x123 - h.x0);
            return miquelCheck(h).maxResidual();
          }};
}

SuitePlan planDodecahedron(const SuiteConfig& cfg, int n) {
  return {n, [neg = cfg.negativeControl](CaseContext& c) {
            FourCubeData d = randomFourCube(c.rng, true);
            c.inputs = "x0 " + describeRange(d.x0);
            if (!neg) return dodecahedronConsistency(d).discrepancy;
            FlipFn skewed = [](const Point& x0, const Point& x1, const Point& x2, const Point& x3, const Point& x12,
                               const Point& x13, const Point& x23) {
              return Point(hexFlip(x0, x1, x2, x3, x12, x13, x23) + kPerturb * (x1 - x0));
            };
            return dodecahedronConsistency(d, skewed).discrepancy;
          }};
}

SuitePlan planCovariant(const SuiteConfig& cfg, int n) {
  return {n, [neg = cfg.negativeControl](CaseContext& c) {
            const Site extent{5, 5, 5};
            const unsigned long long fieldSeed = c.rng();
            c.inputs = "extent 5x5x5 amplitude 0.4 field seed " + std::to_string(fieldSeed);
            CovariantField f = makeCovariantBoundary(extent, 0.4, fieldSeed);
            covariantEvolve(f, extent);
            if (neg) f.set(3, 2, {3, 2, 2}, f.get(3, 2, {3, 2, 2}) * (1.0 + 5 * kPerturb));
            auto r = covariantCheck(f, extent);
            return std::max(r.kkResidual, r.mapResidual);
          }};
}

// ---- Fock ------------------------------------------------------------------

int intPow(int b, int e) {
  int r = 1;
  while (e-- > 0) r *= b;
  return r;
}

SuitePlan planFockTE(const SuiteConfig& cfg) {
  const int side = cfg.maxIndex + 1;
  auto R = std::make_shared<FockRMatrix>(cfg.q, std::max(2 * cfg.maxIndex, 4),
                                         cfg.negativeControl ? kPerturb : 0.0);
  // one case per input tuple, maximized over all output tuples
  return {intPow(side, 6), [R, side](CaseContext& c) {
            std::array<int, 6> in, out;
            int x = c.index;
            for (int& v : in) {
              v = x % side;
              x /= side;
            }
            c.inputs = "in " + describeRange(in);
            double worst = 0;
            for (int o = 0; o < intPow(side, 6); ++o) {
              int y = o;
              for (int& v : out) {
                v = y % side;
                y /= side;
              }
              worst = std::max(worst, fockTECheck(in, out, *R).residual);
            }
            return worst;
          }};
}

SpMat perturbRows(const SpMat& R, int d) {
  SpMat P = R;
  for (int row = 0; row < P.outerSize(); ++row)
    for (SpMat::InnerIterator it(P, row); it; ++it) it.valueRef() *= 1.0 + kPerturb * (row / (d * d));
  return P;
}

SuitePlan planFockIntertwine(const SuiteConfig& cfg, int n) {
  return {n, [cfg](CaseContext& c) {
            const int M = cfg.cutoff;
            c.inputs = describe("M", M, "q", cfg.q);
            std::array<QOscRep, 3> reps = {fockRep(M, cfg.q), fockRep(M, cfg.q), fockRep(M, cfg.q)};
            std::array<LParams, 3> p;
            for (auto& x : p) x = {1.0, -1.0};
            SpMat R = fockRMatrix(M, cfg.q);
            if (cfg.negativeControl) R = perturbRows(R, M);
            return intertwineCheck(buildL(reps, p), R, fockInteriorMask(M));
          }};
}

// ---- cyclic -----------------------------------------------------------------

std::array<double, 3> randomTriangleAngles(std::mt19937_64& rng) {
  return {uniform(rng, 1.2, 1.9), uniform(rng, 1.2, 1.9), uniform(rng, 1.2, 1.9)};
}

CyclicWeightData perturbedWeight(CyclicWeightData d) {
  d.phi[1][1 % d.N] *= 1.0 + 5 * kPerturb;
  return d;
}

SuitePlan planCyclicIntertwine(const SuiteConfig& cfg, int n) {
  return {n, [cfg](CaseContext& c) {
            return resample([&] {
              auto th = randomTriangleAngles(c.rng);
              c.inputs = describe("N", cfg.N, "theta", th[0], th[1], th[2]);
              auto cp = cyclicParamsFromTriangle(sphericalSidesFromAngles(th[0], th[1], th[2]), cfg.N);
              SpMat R = cyclicRMatrix(CyclicWeightData::fromAngles(th[0], th[1], th[2], cfg.N));
              if (cfg.negativeControl) R = perturbRows(R, cfg.N);
              return intertwineCheck(buildL(cyclicReps(cp), cp.L), R);
            });
          }};
}

// Random tetrahedron with all dihedral angles away from 0 and pi.
TetraAngles randomTetrahedron(std::mt19937_64& rng) {
  return resample([&] {
    std::normal_distribution<double> g;
    std::array<Eigen::Vector3d, 4> nn;
    for (auto& v : nn) v = Eigen::Vector3d(g(rng), g(rng), g(rng));
    TetraAngles t = tetraAnglesFromNormals(nn);
    for (double th : t.theta)
      if (th < 0.2 || th > M_PI - 0.2) throw DomainError("dihedral angle too close to 0 or pi");
    return t;
  });
}

std::array<CyclicWeightData, 4> tetraWeights(const TetraAngles& t, int N) {
  auto tr = vertexTriples(t);
  std::array<CyclicWeightData, 4> W;
  for (int i = 0; i < 4; ++i) W[i] = CyclicWeightData::fromAngles(tr[i][0], tr[i][1], tr[i][2], N);
  return W;
}

SuitePlan planCyclicIrc(const SuiteConfig& cfg, int n, bool exhaustive) {
  // one tetrahedron per run, cases are external spin tuples
  std::mt19937_64 rng = caseRng(cfg.seed, ~0ULL);
  auto W = std::make_shared<std::array<CyclicWeightData, 4>>(resample([&] {
    return tetraWeights(randomTetrahedron(rng), cfg.N);
  }));
  if (cfg.negativeControl) (*W)[2] = perturbedWeight((*W)[2]);
  const int N = cfg.N;
  return {n, [W, N, exhaustive](CaseContext& c) {
            Spins14 s;
            if (exhaustive) {
              int x = c.index;
              for (int& v : s) {
                v = x % N;
                x /= N;
              }
            } else {
              std::uniform_int_distribution<int> D(0, N - 1);
              for (int& v : s) v = D(c.rng);
            }
            c.inputs = "spins " + describeRange(s);
            return cyclicIrcTECheck(*W, s).residual;
          }};
}

SuitePlan planCyclicCrossForm(const SuiteConfig& cfg, int n) {
  return {n, [cfg](CaseContext& c) {
            return resample([&] {
              auto th = randomTriangleAngles(c.rng);
              auto d = CyclicWeightData::fromAngles(th[0], th[1], th[2], cfg.N);
              std::uniform_int_distribution<int> D(0, cfg.N - 1);
              Spins8 s;
              for (int& v : s) v = D(c.rng);
              c.inputs = describe("N", cfg.N, "theta", th[0], th[1], th[2]) + " spins " + describeRange(s);
              auto r = cyclicCrossForm(s, d);
              if (!cfg.negativeControl) return r.residual;
              auto p = cyclicCrossForm(s, perturbedWeight(d));
              return relativeResidual(r.vertex, p.phase * p.weight);
            });
          }};
}

// ---- modular ---------------------------------------------------------------

SuitePlan planModularSpecfun(const SuiteConfig& cfg, int n) {
  return {n, [cfg](CaseContext& c) {
            ModularParam mp = ModularParam::fromPolar(cfg.bMod, cfg.bArg);
            ModularParam other = cfg.negativeControl ? ModularParam::fromB(mp.b * (1.0 + kPerturb)) : mp;
            const double reEta = mp.eta.real();
            return resample([&] {
              if (c.index % 2 == 0) {
                cplx z(uniform(c.rng, -1.5, 1.5), uniform(c.rng, -0.5, 0.5) * reEta);
                c.inputs = describe("dilog z", z);
                cplx a = quantumDilog(z, mp, DilogMethod::Quadrature);
                cplx b = quantumDilog(z, other, DilogMethod::ProductSeries);
                return std::abs(a - b) / std::abs(b);
              }
              std::array<cplx, 5> cs;
              for (auto& x : cs) x = cplx(uniform(c.rng, -0.4, 0.4), 0.0);
              c.inputs = "2psi2 c " + describeRange(cs);
              cplx a = psi22(cs[0], cs[1], cs[2], cs[3], cs[4], mp, Psi22Method::Quadrature);
              cplx b = psi22(cs[0], cs[1], cs[2], cs[3], cs[4], other, Psi22Method::ResidueSeries);
              return std::abs(a - b) / std::abs(b);
            });
          }};
}

SuitePlan planModularIrc(const SuiteConfig& cfg, int n) {
  return {n, [cfg](CaseContext& c) {
            ModularParam mp = ModularParam::fromPolar(cfg.bMod, cfg.bArg);
            std::array<double, 6> t;
            for (double& x : t) x = uniform(c.rng, -0.3, 0.3);
            std::array<double, 8> fields;
            for (double& x : fields) x = uniform(c.rng, -0.06, 0.06);
            RealSpins14 s;
            for (double& x : s) x = uniform(c.rng, -0.5, 0.5);
            c.inputs = "T " + describeRange(t) + " fields " + describeRange(fields) + " spins " + describeRange(s);
            SpectralConstraintSet cs = makeSpectralConstraintSet(t, fields);
            // breaking one spectral constraint
            if (cfg.negativeControl) cs.T[2][0] += 0.15;
            std::array<ModularWeight, 4> W;
            for (int i = 0; i < 4; ++i) W[i] = {mp, cs.T[i], cs.f[i], Psi22Method::Quadrature};
            return modularIrcTECheck(W, s).residual;
          }};
}

const std::map<std::string, std::pair<int, double>>& suiteDefaults() {
  static const std::map<std::string, std::pair<int, double>> d = {
      {"classical-lybe", {1000, 1e-12}},   {"classical-fte", {200, 1e-10}},  {"symplectic", {100, 1e-6}},
      {"geometry-flip", {50, 1e-8}},       {"miquel", {50, 1e-9}},           {"dodecahedron", {25, 1e-8}},
      {"covariant", {1, 1e-10}},           {"fock-te", {0, 1e-12}},          {"fock-intertwine", {1, 1e-10}},
      {"cyclic-intertwine", {2, 1e-10}},   {"cyclic-te-irc", {1000, 1e-9}},  {"cyclic-cross-form", {200, 1e-10}},
      {"modular-specfun", {20, 1e-6}},     {"modular-te-irc", {5, 1e-4}},
  };
  return d;
}

SuitePlan makePlan(const SuiteConfig& cfg, int n) {
  const std::string& s = cfg.suite;
  if (s == "classical-lybe") return planLybe(cfg, n);
  if (s == "classical-fte") return planFte(cfg, n);
  if (s == "symplectic") return planSymplectic(cfg, n);
  if (s == "geometry-flip") return planGeometryFlip(cfg, n);
  if (s == "miquel") return planMiquel(cfg, n);
  if (s == "dodecahedron") return planDodecahedron(cfg, n);
  if (s == "covariant") return planCovariant(cfg, n);
  if (s == "fock-te") return planFockTE(cfg);
  if (s == "fock-intertwine") return planFockIntertwine(cfg, n);
  if (s == "cyclic-intertwine") return planCyclicIntertwine(cfg, n);
  if (s == "cyclic-te-irc") return planCyclicIrc(cfg, n, cfg.N == 2 && cfg.samples < 0);
  if (s == "cyclic-cross-form") return planCyclicCrossForm(cfg, n);
  if (s == "modular-specfun") return planModularSpecfun(cfg, n);
  return planModularIrc(cfg, n);
}

std::string unknownSuiteMessage(const std::string& s) {
  std::string msg = "unknown suite '" + s + "'; available:";
  for (const auto& name : availableSuites()) msg += " " + name;
  return msg;
}

}  // namespace

void SuiteConfig::validate() const {
  if (!suiteDefaults().count(suite)) throw ConfigError(unknownSuiteMessage(suite));
  if (tol == 0.0 || (tol < 0.0 && tol != -1.0)) throw ConfigError("tolerance must be positive");
  if (N < 2) throw ConfigError("N must be at least 2");
  if (suite == "cyclic-intertwine" && N % 2 == 0) throw ConfigError("cyclic-intertwine needs odd N");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (samples == 0 || samples < -1) throw ConfigError("samples must be positive");
  if (cutoff < 2) throw ConfigError("Fock cutoff must be at least 2");
  if (maxIndex < 0) throw ConfigError("maxIndex must be non-negative");
  if (!(std::abs(q) > 0.0 && std::abs(q) < 1.0)) throw ConfigError("Fock suites need 0 < |q| < 1");
  if (!(bMod > 0.0)) throw ConfigError("b modulus must be positive");
  if (!(controlThreshold > 0.0)) throw ConfigError("control threshold must be positive");
}

const std::vector<std::string>& availableSuites() {
  static const std::vector<std::string> names = {
      "classical-lybe", "classical-fte",   "symplectic",        "geometry-flip", "miquel",
      "dodecahedron",   "covariant",       "fock-te",           "fock-intertwine", "cyclic-intertwine",
      "cyclic-te-irc",  "cyclic-cross-form", "modular-specfun", "modular-te-irc"};
  return names;
}

int defaultSamples(const std::string& suite, const SuiteConfig& cfg) {
  auto it = suiteDefaults().find(suite);
  if (it == suiteDefaults().end()) throw ConfigError(unknownSuiteMessage(suite));
  if (suite == "fock-te") return intPow(cfg.maxIndex + 1, 6);
  if (suite == "cyclic-te-irc" && cfg.N == 2) return 1 << 14;
  return it->second.first;
}

double defaultTolerance(const std::string& suite) {
  auto it = suiteDefaults().find(suite);
  if (it == suiteDefaults().end()) throw ConfigError(unknownSuiteMessage(suite));
  return it->second.second;
}

std::mt19937_64 caseRng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ index));
}

Report runSuite(const SuiteConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.suite = config.suite;
  rep.mode = config.negativeControl ? "negative-control" : "verify";
  rep.config = config;
  rep.tolerance = config.tol > 0 ? config.tol : defaultTolerance(config.suite);
  rep.config.tol = rep.tolerance;

  int n = config.samples > 0 ? config.samples : defaultSamples(config.suite, config);
  if (config.suite == "fock-te") n = defaultSamples("fock-te", config);
  rep.config.samples = n;
  SuitePlan plan = makePlan(config, n);

  rep.cases.resize(plan.count);
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::mutex errMutex;
  std::string error;
  auto worker = [&] {
    while (!failed) {
      int i = next++;
      if (i >= plan.count) return;
      CaseContext c{caseRng(config.seed, static_cast<std::uint64_t>(i)), i, {}};
      try {
        double r = plan.run(c);
        rep.cases[i] = {i, r, std::move(c.inputs)};
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(errMutex);
        if (!failed.exchange(true))
          error = config.suite + " case " + std::to_string(i) + " (seed " + std::to_string(config.seed) +
                  ", inputs: " + c.inputs + "): " + e.what();
      }
    }
  };
  const int w = std::min(config.workers, std::max(plan.count, 1));
  if (w == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < w; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed) throw SuiteError(error);

  double sum = 0;
  for (const auto& c : rep.cases) {
    // NaN counts as the worst possible residual
    double r = std::isnan(c.residual) ? INFINITY : c.residual;
    if (rep.worstCase < 0 || r > rep.maxResidual) {
      rep.maxResidual = r;
      rep.worstCase = c.index;
    }
    sum += r;
  }
  rep.meanResidual = rep.cases.empty() ? 0.0 : sum / rep.cases.size();
  rep.pass = config.negativeControl ? rep.maxResidual > config.controlThreshold : rep.maxResidual < rep.tolerance;
  rep.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace qgeo
