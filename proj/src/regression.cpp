#include "tad/regression.hpp"

#include "tad/config_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>

namespace tad {

using nlohmann::json;

namespace {

TerminationRecord::Kind parse_kind(const std::string& s) {
  if (s == "interception") return TerminationRecord::Kind::Interception;
  if (s == "capture") return TerminationRecord::Kind::Capture;
  if (s == "horizon") return TerminationRecord::Kind::HorizonExpired;
  throw ConfigError("expected.kind: unknown termination kind '" + s + "'");
}

std::string describe(TerminationRecord::Kind kind, int defender) {
  TerminationRecord r;
  r.kind = kind;
  std::string s = r.kind_name();
  if (kind == TerminationRecord::Kind::Interception) s += " d" + std::to_string(defender);
  return s;
}

RegressionOutcome evaluate(const RegressionCase& c, const RunOptions& options, double tol) {
  const ScenarioConfig cfg = load_config(c.config, c.overrides);
  RegressionOutcome out;
  out.expected = c;
  out.log = run(cfg, c.profile, options);
  const auto& term = out.log.termination;
  out.kind_ok = term.kind == c.kind &&
                (c.kind != TerminationRecord::Kind::Interception || term.defender == c.defender);
  out.time_ok = std::abs(term.time - c.time) <= tol + 1e-9;
  return out;
}

}  // namespace

RegressionManifest RegressionManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open manifest");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": malformed JSON (" + e.what() + ")");
  }
  RegressionManifest m;
  m.suite = doc.value("suite", "");
  m.time_tolerance = doc.value("time_tolerance", 0.05);
  m.caveat = doc.value("caveat", "");
  const auto base = path.parent_path();
  for (const auto& c : doc.at("cases")) {
    RegressionCase rc;
    rc.id = c.at("id").get<std::string>();
    rc.config = base / c.at("config").get<std::string>();
    rc.overrides = c.value("overrides", std::vector<std::string>{});
    rc.profile = parse_profile(c.at("profile").get<std::string>());
    const json& e = c.at("expected");
    rc.kind = parse_kind(e.at("kind").get<std::string>());
    if (rc.kind == TerminationRecord::Kind::Interception) {
      rc.defender = PlayerId::parse(e.at("defender").get<std::string>()).index;
    }
    rc.time = e.at("time").get<double>();
    m.cases.push_back(std::move(rc));
  }
  return m;
}

std::vector<RegressionOutcome> run_regression(const RegressionManifest& manifest,
                                              const RunOptions& options, int threads) {
  threads = std::max(1, threads);
  std::vector<RegressionOutcome> outcomes(manifest.cases.size());
  for (std::size_t start = 0; start < manifest.cases.size(); start += threads) {
    const std::size_t stop = std::min(manifest.cases.size(), start + threads);
    std::vector<std::future<RegressionOutcome>> batch;
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred,
                                 evaluate, std::cref(manifest.cases[i]), std::cref(options),
                                 manifest.time_tolerance));
    }
    for (std::size_t i = start; i < stop; ++i) outcomes[i] = batch[i - start].get();
  }
  return outcomes;
}

void print_regression_table(std::ostream& out, const RegressionManifest& manifest,
                            const std::vector<RegressionOutcome>& outcomes) {
  out << std::left << std::setw(26) << "case" << std::setw(20) << "expected" << std::setw(10)
      << "t_exp" << std::setw(20) << "actual" << std::setw(10) << "t_act" << "result\n";
  for (const auto& o : outcomes) {
    const auto& e = o.expected;
    const auto& t = o.log.termination;
    out << std::left << std::setw(26) << e.id << std::setw(20) << describe(e.kind, e.defender)
        << std::setw(10) << e.time << std::setw(20) << describe(t.kind, t.defender) << std::setw(10)
        << t.time << (o.passed() ? "PASS" : "FAIL") << '\n';
  }
  if (!manifest.caveat.empty()) out << "note: " << manifest.caveat << '\n';
}

}  // namespace tad
