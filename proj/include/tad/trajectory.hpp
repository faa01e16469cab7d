#pragma once

#include "tad/model.hpp"
#include "tad/strategies.hpp"
#include "tad/visibility.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tad {

enum class Profile { CompleteObservations, LimitedObservations };

std::string to_string(Profile p);
Profile parse_profile(const std::string& s);

struct TerminationRecord {
  enum class Kind { Interception, Capture, HorizonExpired };

  Kind kind = Kind::HorizonExpired;
  int defender = 0;  // 1-based, Interception only
  int node = 0;
  double time = 0.0;
  double distance = 0.0;

  /// "interception", "capture" or "horizon".
  std::string kind_name() const;
};

/// Per-node record of the gain synthesis.
struct GainDiagnostics {
  double theta = 0.0;
  int iterations = 0;
  bool fast_path = false;
  bool converged = true;
};

/// State and controls at one grid node. Controls at node k act on
/// [t_k, t_{k+1}).
struct NodeRecord {
  double t = 0.0;
  Positions positions;
  Vec z;
  Vec u_d;  // 2n, defender team stacked
  Vec2 u_tau = Vec2::Zero();
  Vec2 u_a = Vec2::Zero();
  std::optional<VisibilitySnapshot> snapshot;
  std::optional<NodeGains> gains;
  std::optional<GainDiagnostics> diagnostics;
};

struct TrajectoryLog {
  ScenarioConfig config;
  Profile profile = Profile::CompleteObservations;
  double step = 0.0;
  std::vector<NodeRecord> nodes;
  std::vector<TransitionEvent> events;
  TerminationRecord termination;
  // Strategy label per player group, e.g. "fne" or "c-nafne".
  std::string defender_strategy, target_strategy, attacker_strategy;
};

}  // namespace tad
