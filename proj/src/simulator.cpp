#include "tad/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tad {

std::string to_string(Profile p) {
  return p == Profile::CompleteObservations ? "complete" : "limited";
}

Profile parse_profile(const std::string& s) {
  if (s == "complete" || s == "complete_observations") return Profile::CompleteObservations;
  if (s == "limited" || s == "limited_observations") return Profile::LimitedObservations;
  throw ConfigError("profile: expected 'complete' or 'limited', got '" + s + "'");
}

std::string TerminationRecord::kind_name() const {
  switch (kind) {
    case Kind::Interception:
      return "interception";
    case Kind::Capture:
      return "capture";
    case Kind::HorizonExpired:
      return "horizon";
  }
  return "?";
}

FixedNetwork FixedNetwork::from_log(const TrajectoryLog& log) {
  FixedNetwork f;
  for (const auto& rec : log.nodes) {
    if (!rec.snapshot || !rec.gains) {
      throw std::invalid_argument("log has no recorded network; was it a limited-observation run?");
    }
    f.snapshots.push_back(*rec.snapshot);
    f.gains.push_back(*rec.gains);
  }
  return f;
}

std::optional<TerminationRecord> check_termination(const ScenarioConfig& cfg,
                                                   const ReducedState& z, int node, double t) {
  for (int i = 1; i <= cfg.n(); ++i) {
    const double dist = z.of(PlayerId::defender(i)).norm();
    if (dist <= cfg.defenders[i - 1].capture_radius) {
      return TerminationRecord{TerminationRecord::Kind::Interception, i, node, t, dist};
    }
  }
  const double dist = z.of(PlayerId::target()).norm();
  if (dist <= cfg.attacker.capture_radius) {
    return TerminationRecord{TerminationRecord::Kind::Capture, 0, node, t, dist};
  }
  return std::nullopt;
}

Vec team_controls(const NodeRecord& rec, Interaction mode) {
  if (mode == Interaction::I1) return rec.u_d;
  Vec u(rec.u_d.size() + 2);
  u << rec.u_d, rec.u_tau;
  return u;
}

namespace {

// One classical RK4 step of the single-integrator dynamics with the controls
// held constant over the step.
Positions advance(const Positions& x, const NodeRecord& ctl, double h) {
  const int n = static_cast<int>(x.defenders.size());
  auto velocity = [&](const Positions&) {
    Positions v;
    v.defenders.resize(n);
    for (int i = 0; i < n; ++i) v.defenders[i] = ctl.u_d.segment<2>(2 * i);
    v.target = ctl.u_tau;
    v.attacker = ctl.u_a;
    return v;
  };
  auto shifted = [&](const Positions& base, double a, const Positions& dv) {
    Positions out = base;
    for (int i = 0; i < n; ++i) out.defenders[i] += a * dv.defenders[i];
    out.target += a * dv.target;
    out.attacker += a * dv.attacker;
    return out;
  };
  const Positions k1 = velocity(x);
  const Positions k2 = velocity(shifted(x, 0.5 * h, k1));
  const Positions k3 = velocity(shifted(x, 0.5 * h, k2));
  const Positions k4 = velocity(shifted(x, h, k3));
  Positions next = x;
  for (int i = 0; i < n; ++i) {
    next.defenders[i] +=
        (h / 6.0) * (k1.defenders[i] + 2.0 * k2.defenders[i] + 2.0 * k3.defenders[i] + k4.defenders[i]);
  }
  next.target += (h / 6.0) * (k1.target + 2.0 * k2.target + 2.0 * k3.target + k4.target);
  next.attacker += (h / 6.0) * (k1.attacker + 2.0 * k2.attacker + 2.0 * k3.attacker + k4.attacker);
  return next;
}

}  // namespace

TrajectoryLog run(const ScenarioConfig& cfg, Profile profile, const RunOptions& options) {
  const GameMatrices m = build_matrices(cfg);
  const RiccatiSolution sol = solve(m, TimeGrid::from_config(cfg));
  return run(cfg, m, sol, profile, options);
}

TrajectoryLog run(const ScenarioConfig& cfg, const GameMatrices& m, const RiccatiSolution& sol,
                  Profile profile, const RunOptions& options) {
  cfg.validate();
  const auto& grid = sol.grid;
  const int n = cfg.n();
  const bool limited = profile == Profile::LimitedObservations;
  const bool i2 = cfg.interaction == Interaction::I2;
  if (options.fixed && !limited) {
    throw std::invalid_argument("a fixed network only applies to the limited-observation profile");
  }

  TrajectoryLog log;
  log.config = cfg;
  log.profile = profile;
  log.step = grid.step();
  log.attacker_strategy = "fne";
  log.defender_strategy = limited ? "c-nafne" : "fne";
  log.target_strategy = (limited && i2) ? "c-nafne" : "fne";

  Positions pos = Positions::from_config(cfg);
  NodeGains warm = NodeGains::zero(n, cfg.interaction);
  bool terminated = false;
  std::vector<VisibilitySnapshot> snaps;
  std::vector<double> times;

  for (int k = 0; k <= grid.intervals(); ++k) {
    NodeRecord rec;
    rec.t = grid.time(k);
    rec.positions = pos;
    const ReducedState z = to_reduced(pos);
    rec.z = z.vector();

    if (!terminated) {
      if (auto term = check_termination(cfg, z, k, rec.t)) {
        log.termination = *term;
        terminated = true;
      }
    }

    const RiccatiValue P = sol.node(k);
    rec.u_a = fne_gain(PlayerGroup::Attacker, m, P) * rec.z;
    if (!limited) {
      rec.u_d = fne_gain(PlayerGroup::Defenders, m, P) * rec.z;
      rec.u_tau = fne_gain(PlayerGroup::Target, m, P) * rec.z;
    } else {
      VisibilitySnapshot snap;
      NodeGains gains;
      if (options.fixed) {
        snap = options.fixed->snapshots.at(k);
        gains = options.fixed->gains.at(k);
      } else {
        snap = snapshot(z, cfg);
        NodeSolution ns = solve_node(m, P, snap, warm, cfg.gamma_weights, options.optimizer);
        rec.diagnostics = GainDiagnostics{ns.theta, ns.iterations, ns.fast_path, ns.converged};
        gains = std::move(ns.gains);
        warm = gains;
      }
      const Vec u_team = adapted_control(gains, snap, rec.z);
      rec.u_d = u_team.head(2 * n);
      rec.u_tau = i2 ? Vec2(u_team.tail<2>())
                     : Vec2(fne_gain(PlayerGroup::Target, m, P) * rec.z);
      snaps.push_back(snap);
      times.push_back(rec.t);
      rec.snapshot = std::move(snap);
      rec.gains = std::move(gains);
    }
    if (options.perturb) options.perturb(rec);

    log.nodes.push_back(rec);
    if (terminated && options.stop_at_termination) break;
    if (k < grid.intervals()) pos = advance(pos, rec, grid.step());
  }

  if (!terminated) {
    const ReducedState zT(log.nodes.back().z);
    log.termination.kind = TerminationRecord::Kind::HorizonExpired;
    log.termination.node = grid.intervals();
    log.termination.time = grid.horizon();
    log.termination.distance = zT.of(PlayerId::target()).norm();
  }
  if (limited) log.events = transitions(snaps, times);
  return log;
}

SuicidalReport run_suicidal_check(const ScenarioConfig& cfg, const RunOptions& options) {
  if (cfg.lambda != 0) throw std::invalid_argument("suicidal check requires lambda = 0");
  const GameMatrices m = build_matrices(cfg);
  const RiccatiSolution sol = solve(m, TimeGrid::from_config(cfg));

  SuicidalReport r;
  r.complete = run(cfg, m, sol, Profile::CompleteObservations, options);
  r.limited = run(cfg, m, sol, Profile::LimitedObservations, options);

  const int n = cfg.n();
  const Vec2 z0 = r.complete.nodes.front().z.segment<2>(2 * n);
  r.cross_tolerance = 1e-6 * (1.0 + z0.squaredNorm());
  auto max_cross = [&](const TrajectoryLog& log) {
    double worst = 0.0;
    for (const auto& rec : log.nodes) {
      const Vec2 zt = rec.z.segment<2>(2 * n);
      worst = std::max(worst, std::abs(z0.x() * zt.y() - z0.y() * zt.x()));
    }
    return worst;
  };
  r.max_cross_complete = max_cross(r.complete);
  r.max_cross_limited = max_cross(r.limited);

  const std::size_t common = std::min(r.complete.nodes.size(), r.limited.nodes.size());
  for (std::size_t k = 0; k < common; ++k) {
    const auto& a = r.complete.nodes[k];
    const auto& b = r.limited.nodes[k];
    r.max_state_deviation = std::max({r.max_state_deviation,
                                      (a.positions.attacker - b.positions.attacker).norm(),
                                      (a.positions.target - b.positions.target).norm()});
    r.max_control_deviation =
        std::max({r.max_control_deviation, (a.u_a - b.u_a).norm(), (a.u_tau - b.u_tau).norm()});
  }
  return r;
}

DelayReport run_paired_delay(const ScenarioConfig& cfg, PlayerId player, double alternative_radius,
                             const RunOptions& options) {
  if (player.is_attacker() || (player.is_target() && cfg.interaction != Interaction::I2)) {
    throw std::invalid_argument("paired runs vary the radius of a visibility-constrained player");
  }
  ScenarioConfig other = cfg;
  if (player.is_defender()) {
    other.defenders.at(player.index - 1).visibility = VisibilityRadius::finite(alternative_radius);
  } else {
    other.target.visibility = VisibilityRadius::finite(alternative_radius);
  }
  other.validate();

  const GameMatrices m = build_matrices(cfg);
  const RiccatiSolution sol = solve(m, TimeGrid::from_config(cfg));
  DelayReport r;
  r.first = run(cfg, m, sol, Profile::LimitedObservations, options);
  r.second = run(other, m, sol, Profile::LimitedObservations, options);

  auto first_edge = [&](const TrajectoryLog& log) -> std::optional<std::size_t> {
    for (std::size_t k = 0; k < log.nodes.size(); ++k) {
      if (log.nodes[k].snapshot->has_outgoing(player)) return k;
    }
    return std::nullopt;
  };
  const auto e1 = first_edge(r.first);
  const auto e2 = first_edge(r.second);
  if (e1) r.first_edge_time = r.first.nodes[*e1].t;
  if (e2) r.second_edge_time = r.second.nodes[*e2].t;

  const std::size_t common = std::min(r.first.nodes.size(), r.second.nodes.size());
  std::size_t limit = common;
  if (e1) limit = std::min(limit, *e1);
  if (e2) limit = std::min(limit, *e2);
  r.compared_nodes = static_cast<int>(limit);

  for (std::size_t k = 0; k < common; ++k) {
    const Vec u1 = team_controls(r.first.nodes[k], cfg.interaction);
    const Vec u2 = team_controls(r.second.nodes[k], cfg.interaction);
    const bool same = (u1.array() == u2.array()).all();
    if (!same) {
      if (!r.first_divergence) r.first_divergence = r.first.nodes[k].t;
      if (k < limit) r.identical_before = false;
    }
  }
  return r;
}

}  // namespace tad
