#pragma once

#include "tad/simulator.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace tad {

struct RegressionCase {
  std::string id;
  std::filesystem::path config;
  std::vector<std::string> overrides;
  Profile profile = Profile::CompleteObservations;
  TerminationRecord::Kind kind = TerminationRecord::Kind::HorizonExpired;
  int defender = 0;
  double time = 0.0;
};

struct RegressionManifest {
  std::string suite;
  double time_tolerance = 0.05;
  std::string caveat;
  std::vector<RegressionCase> cases;

  /// Config paths are resolved relative to the manifest's directory.
  static RegressionManifest load(const std::filesystem::path& path);
};

struct RegressionOutcome {
  RegressionCase expected;
  TrajectoryLog log;
  bool kind_ok = false;
  bool time_ok = false;

  bool passed() const { return kind_ok && time_ok; }
};

/// Runs every case, at most `threads` at a time. Outcomes keep manifest order.
std::vector<RegressionOutcome> run_regression(const RegressionManifest& manifest,
                                              const RunOptions& options, int threads = 1);

void print_regression_table(std::ostream& out, const RegressionManifest& manifest,
                            const std::vector<RegressionOutcome>& outcomes);

}  // namespace tad
