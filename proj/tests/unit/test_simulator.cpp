#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace tad;

namespace {

bool same_log(const TrajectoryLog& a, const TrajectoryLog& b) {
  if (a.nodes.size() != b.nodes.size()) return false;
  for (std::size_t k = 0; k < a.nodes.size(); ++k) {
    const auto& x = a.nodes[k];
    const auto& y = b.nodes[k];
    if (x.t != y.t || x.z != y.z || x.u_d != y.u_d || x.u_tau != y.u_tau || x.u_a != y.u_a) return false;
  }
  return a.termination.kind == b.termination.kind && a.termination.node == b.termination.node;
}

}  // namespace

TEST(Simulator, Deterministic) {
  const auto cfg = oracle::scenario("i2_tau2p5.json", {"horizon=1.5"});
  EXPECT_TRUE(same_log(run(cfg, Profile::LimitedObservations), run(cfg, Profile::LimitedObservations)));
}

TEST(Simulator, ReducedStateTracksPositions) {
  const auto cfg = oracle::scenario("i1_nonsuicidal.json");
  const auto log = run(cfg, Profile::LimitedObservations);
  for (const auto& rec : log.nodes) EXPECT_EQ(rec.z, to_reduced(rec.positions).vector());
  EXPECT_EQ(log.nodes.back().t, log.termination.time);
}

TEST(Simulator, TerminationAtStart) {
  auto cfg = oracle::scenario("i1_nonsuicidal.json");
  cfg.defenders[1].position = cfg.attacker.position + Vec2(0.05, 0.0);
  cfg.target.position = cfg.attacker.position;
  const auto log = run(cfg, Profile::CompleteObservations);
  ASSERT_EQ(log.nodes.size(), 1u);
  // Interceptions win ties with capture.
  EXPECT_EQ(log.termination.kind, TerminationRecord::Kind::Interception);
  EXPECT_EQ(log.termination.defender, 2);
  EXPECT_EQ(log.termination.time, 0.0);
}

TEST(Simulator, CheckTerminationOrder) {
  auto cfg = oracle::scenario("i1_nonsuicidal.json");
  cfg.attacker.capture_radius = 0.5;
  Positions p = Positions::from_config(cfg);
  EXPECT_FALSE(check_termination(cfg, to_reduced(p), 0, 0.0).has_value());
  p.target = p.attacker + Vec2(0.5, 0.0);  // exactly on the boundary
  const auto t = check_termination(cfg, to_reduced(p), 3, 0.015);
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(t->kind, TerminationRecord::Kind::Capture);
  EXPECT_EQ(t->node, 3);
}

TEST(Simulator, HorizonExpiry) {
  const auto cfg = oracle::scenario("i1_nonsuicidal.json", {"horizon=0.5"});
  const auto log = run(cfg, Profile::CompleteObservations);
  EXPECT_EQ(log.termination.kind, TerminationRecord::Kind::HorizonExpired);
  EXPECT_EQ(log.nodes.size(), 101u);
  EXPECT_DOUBLE_EQ(log.termination.time, 0.5);
}

TEST(Simulator, SuicidalAttackerMovesStraight) {
  const auto report = run_suicidal_check(oracle::scenario("i1_suicidal.json"));
  EXPECT_TRUE(report.straight_line());
  EXPECT_LE(report.max_state_deviation, 1e-8);
  EXPECT_LE(report.max_control_deviation, 1e-8);
  EXPECT_THROW(run_suicidal_check(oracle::scenario("i1_nonsuicidal.json")), std::invalid_argument);
}

TEST(Simulator, FixedNetworkReplaysExactly) {
  const auto cfg = oracle::scenario("i1_nonsuicidal.json");
  const auto m = build_matrices(cfg);
  const auto sol = solve(m, TimeGrid::from_config(cfg));
  const auto log = run(cfg, m, sol, Profile::LimitedObservations);
  RunOptions replay;
  replay.fixed = FixedNetwork::from_log(log);
  EXPECT_TRUE(same_log(log, run(cfg, m, sol, Profile::LimitedObservations, replay)));
  EXPECT_THROW(run(cfg, m, sol, Profile::CompleteObservations, replay), std::invalid_argument);
  const auto complete = run(cfg, m, sol, Profile::CompleteObservations);
  EXPECT_THROW(FixedNetwork::from_log(complete), std::invalid_argument);
}

TEST(Simulator, PairedRunWithSameRadiusIsIdentical) {
  const auto cfg = oracle::scenario("i2_tau2p5.json", {"horizon=1.5"});
  const auto report = run_paired_delay(cfg, PlayerId::defender(3), 0.3);
  EXPECT_TRUE(report.identical_before);
  EXPECT_FALSE(report.first_divergence.has_value());
  EXPECT_TRUE(same_log(report.first, report.second));
  EXPECT_THROW(run_paired_delay(cfg, PlayerId::attacker(), 1.0), std::invalid_argument);
}

TEST(Simulator, LargerRadiusOnlyChangesControlsAfterFirstEdge) {
  const auto cfg = oracle::scenario("i2_tau2p5.json");
  const auto report = run_paired_delay(cfg, PlayerId::defender(3), 0.6);
  EXPECT_TRUE(report.identical_before);
  ASSERT_TRUE(report.second_edge_time.has_value());
  ASSERT_TRUE(report.first_divergence.has_value());
  EXPECT_GE(*report.first_divergence, *report.second_edge_time);
}
