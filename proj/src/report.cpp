#include "qgeo/errors.hpp"
#include "qgeo/harness.hpp"

#include <fstream>
#include <json.hpp>

namespace qgeo {

using nlohmann::json;

namespace {

json configJson(const SuiteConfig& c) {
  return {{"suite", c.suite},       {"q", c.q},
          {"bMod", c.bMod},         {"bArg", c.bArg},
          {"N", c.N},               {"cutoff", c.cutoff},
          {"maxIndex", c.maxIndex}, {"seed", c.seed},
          {"samples", c.samples},   {"tol", c.tol},
          {"workers", c.workers},   {"negativeControl", c.negativeControl},
          {"controlThreshold", c.controlThreshold}};
}

json reportJson(const Report& r, bool timing) {
  json j = {{"suite", r.suite},
            {"mode", r.mode},
            {"pass", r.pass},
            {"tolerance", r.tolerance},
            {"maxResidual", r.maxResidual},
            {"meanResidual", r.meanResidual},
            {"cases", r.cases.size()},
            {"config", configJson(r.config)}};
  if (r.worstCase >= 0) {
    const CaseResult& w = r.cases[r.worstCase];
    j["worstCase"] = {{"index", w.index}, {"residual", w.residual}, {"inputs", w.inputs}};
  }
  if (r.config.fullResiduals) {
    json all = json::array();
    for (const auto& c : r.cases) all.push_back(c.residual);
    j["residuals"] = all;
  }
  if (timing) j["wallSeconds"] = r.wallSeconds;
  return j;
}

}  // namespace

SuiteConfig configFromJsonFile(const std::string& path, SuiteConfig c) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file " + path + " must hold a JSON object");
  static const char* known[] = {"suite",   "q",       "bMod",    "bArg",    "N",
                                "cutoff",  "maxIndex", "seed",   "samples", "tol",
                                "workers", "negativeControl", "controlThreshold", "fullResiduals", "out"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      throw ConfigError("config file " + path + ": unknown key '" + key + "'");
  }
  try {
    c.suite = j.value("suite", c.suite);
    c.q = j.value("q", c.q);
    c.bMod = j.value("bMod", c.bMod);
    c.bArg = j.value("bArg", c.bArg);
    c.N = j.value("N", c.N);
    c.cutoff = j.value("cutoff", c.cutoff);
    c.maxIndex = j.value("maxIndex", c.maxIndex);
    c.seed = j.value("seed", c.seed);
    c.samples = j.value("samples", c.samples);
    c.tol = j.value("tol", c.tol);
    c.workers = j.value("workers", c.workers);
    c.negativeControl = j.value("negativeControl", c.negativeControl);
    c.controlThreshold = j.value("controlThreshold", c.controlThreshold);
    c.fullResiduals = j.value("fullResiduals", c.fullResiduals);
    c.out = j.value("out", c.out);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  return c;
}

std::string reportToJson(const Report& r, bool includeTiming) { return reportJson(r, includeTiming).dump(2); }

std::string reportsToJson(const std::vector<Report>& reports, bool includeTiming) {
  json arr = json::array();
  bool all = true;
  for (const auto& r : reports) {
    arr.push_back(reportJson(r, includeTiming));
    all = all && r.pass;
  }
  return json{{"allPass", all}, {"reports", arr}}.dump(2);
}

void writeReports(const std::vector<Report>& reports, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report file " + path);
  out << reportsToJson(reports) << "\n";
  if (!out) throw std::runtime_error("error writing report file " + path);
}

std::vector<ReportSummary> readReports(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open report file " + path);
  json j;
  try {
    in >> j;
    std::vector<ReportSummary> out;
    for (const auto& r : j.at("reports")) {
      ReportSummary s;
      s.suite = r.at("suite").get<std::string>();
      s.mode = r.at("mode").get<std::string>();
      s.maxResidual = r.at("maxResidual").is_null() ? INFINITY : r.at("maxResidual").get<double>();
      s.tolerance = r.at("tolerance").get<double>();
      s.pass = r.at("pass").get<bool>();
      out.push_back(s);
    }
    return out;
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed report file " + path + ": " + e.what());
  }
}

}  // namespace qgeo
