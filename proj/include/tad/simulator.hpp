#pragma once

#include "tad/consistency.hpp"
#include "tad/model.hpp"
#include "tad/riccati.hpp"
#include "tad/trajectory.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace tad {

/// Network and gains frozen from an earlier run, replayed node by node.
struct FixedNetwork {
  std::vector<VisibilitySnapshot> snapshots;
  std::vector<NodeGains> gains;

  static FixedNetwork from_log(const TrajectoryLog& log);
};

struct RunOptions {
  OptimizerSettings optimizer;
  /// Stop at the first node meeting a termination criterion. When false the
  /// run covers the whole horizon and only records the first trigger.
  bool stop_at_termination = true;
  /// Replay a recorded network and gain schedule instead of computing them
  /// from the realized state (limited profile only).
  std::optional<FixedNetwork> fixed;
  /// Called after the controls of a node are computed and before they are
  /// applied; may overwrite any control in the record.
  std::function<void(NodeRecord&)> perturb;
};

/// First termination criterion met by the state, checking interceptions in
/// defender order before capture.
std::optional<TerminationRecord> check_termination(const ScenarioConfig& cfg,
                                                   const ReducedState& z, int node, double t);

/// Closed-loop simulation of a strategy profile.
TrajectoryLog run(const ScenarioConfig& cfg, Profile profile, const RunOptions& options = {});
/// Same, reusing matrices and a Riccati solution that match cfg.
TrajectoryLog run(const ScenarioConfig& cfg, const GameMatrices& m, const RiccatiSolution& sol,
                  Profile profile, const RunOptions& options = {});

struct SuicidalReport {
  TrajectoryLog complete;
  TrajectoryLog limited;
  /// max_k |z_tau^x(0) z_tau^y(t_k) - z_tau^y(0) z_tau^x(t_k)| per run.
  double max_cross_complete = 0.0;
  double max_cross_limited = 0.0;
  /// 1e-6 * (1 + ||z_tau(0)||^2).
  double cross_tolerance = 0.0;
  /// Largest difference of attacker/target positions and controls between
  /// the two runs over their common nodes.
  double max_state_deviation = 0.0;
  double max_control_deviation = 0.0;

  bool straight_line() const {
    return max_cross_complete <= cross_tolerance && max_cross_limited <= cross_tolerance;
  }
};

/// Runs both observation profiles of a suicidal-attacker scenario.
SuicidalReport run_suicidal_check(const ScenarioConfig& cfg, const RunOptions& options = {});

struct DelayReport {
  TrajectoryLog first;
  TrajectoryLog second;
  /// First node time with an outgoing edge of the varied player; empty when
  /// the player never sees anyone.
  std::optional<double> first_edge_time;
  std::optional<double> second_edge_time;
  /// Nodes [0, compared_nodes) were compared bit for bit.
  int compared_nodes = 0;
  bool identical_before = true;
  /// First node at which the team controls differ, over the common nodes.
  std::optional<double> first_divergence;
};

/// Two limited-observation runs that differ only in one constrained player's
/// visibility radius.
DelayReport run_paired_delay(const ScenarioConfig& cfg, PlayerId player, double alternative_radius,
                             const RunOptions& options = {});

/// Stacked team controls of a node: u_d in I1, (u_d, u_tau) in I2.
Vec team_controls(const NodeRecord& rec, Interaction mode);

}  // namespace tad
