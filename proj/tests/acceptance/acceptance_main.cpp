// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Exit status is the number of failed criteria (0 when everything passes).
#include "oracles.hpp"

#include "tad/regression.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

using namespace tad;

namespace {

struct Criterion {
  std::string name;
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << std::scientific << v;
  return s.str();
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream s;
  s << std::setprecision(digits) << std::fixed << v;
  return s.str();
}

int threads() { return std::max(1u, std::thread::hardware_concurrency()); }

const std::vector<std::string> kScenarios{"i1_nonsuicidal.json", "i1_suicidal.json", "i2_complete.json",
                                          "i2_tau10.json",       "i2_tau2p5.json",   "i2_d3_0p6.json"};

// ---------------------------------------------------------------------------

Criterion riccati() {
  Criterion c{"Riccati correctness"};
  for (const auto& file : kScenarios) {
    const auto cfg = oracle::scenario(file);
    const auto m = build_matrices(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const auto sol = solve(m, TimeGrid::from_config(cfg));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double halving = oracle::step_halving_error(cfg);
    const double term = oracle::terminal_mismatch(m, sol);
    const double asym = oracle::max_asymmetry(sol);
    const double fd = oracle::fd_residual_ratio(m, sol);
    c.check(halving <= 1e-6 && term == 0.0 && asym == 0.0 && fd <= 1.0 && secs < 10.0,
            file + ": step-halving " + fmt(halving) + ", terminal " + fmt(term) + ", asymmetry " +
                fmt(asym) + ", FD ratio " + fixed(fd) + ", solve " + fixed(secs) + " s");
  }
  return c;
}

Criterion suicidal() {
  Criterion c{"Suicidal-attacker structure"};
  const auto cfg = oracle::scenario("i1_suicidal.json");
  const auto s = oracle::suicidal_structure(cfg);
  c.check(s.cross_blocks <= 1e-8, "cross blocks " + fmt(s.cross_blocks) + " <= 1e-8");
  c.check(s.scalar_residual <= 1e-8, "target blocks scalar residual " + fmt(s.scalar_residual) + " <= 1e-8");
  c.check(s.reduced_mismatch <= 1e-7, "reduced k1..k6 mismatch " + fmt(s.reduced_mismatch) + " <= 1e-7");
  const auto r = run_suicidal_check(cfg);
  c.check(r.straight_line(), "cross-product proxy complete " + fmt(r.max_cross_complete) + ", limited " +
                                 fmt(r.max_cross_limited) + " <= " + fmt(r.cross_tolerance));
  c.check(r.max_state_deviation <= 1e-8 && r.max_control_deviation <= 1e-8,
          "attacker/target deviation between profiles: state " + fmt(r.max_state_deviation) + ", control " +
              fmt(r.max_control_deviation) + " <= 1e-8");
  return c;
}

Criterion gradients() {
  Criterion c{"Gradient suite"};
  std::mt19937_64 rng(20240601);
  int count = 0;
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (auto mode : {Interaction::I1, Interaction::I2}) {
      double mode_worst = 0.0;
      for (int k = 0; k < 20; ++k) {
        const auto inst = oracle::random_instance(rng, n, mode);
        mode_worst = std::max(mode_worst, oracle::gradient_rel_error(inst));
        ++count;
      }
      c.note("n=" + std::to_string(n) + " " + to_string(mode) + ": worst " + fmt(mode_worst));
      worst = std::max(worst, mode_worst);
    }
  }
  c.check(count >= 100 && worst <= 1e-5,
          std::to_string(count) + " instances, worst relative error " + fmt(worst) + " <= 1e-5");
  return c;
}

Criterion consistency() {
  Criterion c{"Consistency at full visibility"};
  for (const auto& file : kScenarios) {
    if (file == "i1_suicidal.json") continue;
    const auto cfg = oracle::scenario(file);
    const auto m = build_matrices(cfg);
    const auto sol = solve(m, TimeGrid::from_config(cfg));
    const auto log = run(cfg, m, sol, Profile::LimitedObservations);
    int full = 0;
    double worst_theta = 0.0, worst_u = 0.0;
    bool all_fast = true;
    std::optional<double> tail_start;
    for (std::size_t k = 0; k < log.nodes.size(); ++k) {
      const auto& rec = log.nodes[k];
      if (!rec.snapshot->full_visibility()) {
        tail_start.reset();
        continue;
      }
      if (!tail_start) tail_start = rec.t;
      ++full;
      all_fast = all_fast && rec.diagnostics->fast_path;
      worst_theta = std::max(worst_theta, rec.diagnostics->theta);
      const RiccatiValue P = sol.node(static_cast<int>(k));
      Vec u = fne_gain(PlayerGroup::Defenders, m, P) * rec.z;
      Vec got = rec.u_d;
      if (cfg.interaction == Interaction::I2) {
        u.conservativeResize(u.size() + 2);
        u.tail<2>() = fne_gain(PlayerGroup::Target, m, P) * rec.z;
        got = team_controls(rec, cfg.interaction);
      }
      worst_u = std::max(worst_u, (u - got).cwiseAbs().maxCoeff());
    }
    c.check(all_fast && worst_theta <= 1e-12 && worst_u <= 1e-9,
            file + ": " + std::to_string(full) + " full-visibility nodes, theta " + fmt(worst_theta) +
                ", control gap " + fmt(worst_u));
    if (file == "i1_nonsuicidal.json") {
      c.check(tail_start && *tail_start <= 0.96 + 1e-9,
              "I1 full visibility holds from t=" + (tail_start ? fixed(*tail_start) : "never") +
                  " to termination (required from 0.96)");
    }
  }
  return c;
}

// Nash identities and deviations --------------------------------------------

struct NashGame {
  ScenarioConfig cfg;
  GameMatrices m;
  RiccatiSolution sol;
  TrajectoryLog eq;
  RunOptions replay;
};

NashGame nash_game(const std::string& file) {
  NashGame g;
  g.cfg = oracle::scenario(file);
  g.m = build_matrices(g.cfg);
  g.sol = solve(g.m, TimeGrid::from_config(g.cfg));
  RunOptions full;
  full.stop_at_termination = false;
  g.eq = run(g.cfg, g.m, g.sol, Profile::LimitedObservations, full);
  g.replay = full;
  g.replay.fixed = FixedNetwork::from_log(g.eq);
  return g;
}

// Admissible unilateral deviations. Constrained players may only use what
// they see, so their deviations are s(t) dK I_p(t) z(t) with the recorded
// information matrix; unconstrained players get a free bump s(t) dir.
struct Deviation {
  int player = 0;  // 0..n-1 defenders, n target, n+1 attacker
  double t0 = 0, t1 = 0;
  Vec2 dir;
  Mat gain;  // 2 x dim, gated deviations only
};

bool constrained(const NashGame& g, int player) {
  return player < g.cfg.n() || (player == g.cfg.n() && g.cfg.interaction == Interaction::I2);
}

const Mat& info_of(const VisibilitySnapshot& s, int player) {
  return player < s.n ? s.info_d[player] : s.info_tau;
}

Vec2 offset(const Deviation& d, const NodeRecord& rec) {
  const double s = oracle::bump(rec.t, d.t0, d.t1, Vec2(1, 0)).x();
  if (s == 0.0) return Vec2::Zero();
  if (d.gain.size() == 0) return s * d.dir;
  return s * d.gain * (info_of(*rec.snapshot, d.player) * rec.z);
}

void apply(const Deviation& d, int n, NodeRecord& rec) {
  const Vec2 b = offset(d, rec);
  if (d.player < n) rec.u_d.segment<2>(2 * d.player) += b;
  else if (d.player == n) rec.u_tau += b;
  else rec.u_a += b;
}

Deviation random_deviation(std::mt19937_64& rng, const NashGame& g) {
  const int n = g.cfg.n();
  std::uniform_int_distribution<int> who(0, n + 1);
  std::uniform_real_distribution<double> start(0.0, g.cfg.horizon - 1.0), width(0.2, 1.0), angle(0, 2 * M_PI),
      amp(0.2, 1.0);
  std::normal_distribution<double> entry(0.0, 0.3);
  for (;;) {
    Deviation d;
    d.player = who(rng);
    d.t0 = start(rng);
    d.t1 = d.t0 + width(rng);
    const double a = angle(rng), r = amp(rng);
    d.dir = Vec2(r * std::cos(a), r * std::sin(a));
    if (!constrained(g, d.player)) return d;
    d.gain = Mat(2, g.cfg.dim());
    for (Eigen::Index i = 0; i < d.gain.size(); ++i) d.gain(i) = entry(rng);
    // Resample windows in which the deviator sees nobody: nothing to deviate with.
    for (const auto& rec : g.eq.nodes) {
      if (rec.t >= d.t0 && rec.t <= d.t1 && offset(d, rec).norm() > 0.05) return d;
    }
  }
}

PlayerCosts deviate(const NashGame& g, const Deviation& d) {
  RunOptions o = g.replay;
  const int n = g.cfg.n();
  o.perturb = [&](NodeRecord& rec) { apply(d, n, rec); };
  return objective_eval(run(g.cfg, g.m, g.sol, Profile::LimitedObservations, o), g.m, g.sol, CostKind::Adapted);
}

// Several players deviating at once: arbitrary, non-equilibrium trajectories
// for the identity checks.
TrajectoryLog random_trajectory(std::mt19937_64& rng, const NashGame& g) {
  std::vector<Deviation> devs;
  for (int k = 0; k < 4; ++k) devs.push_back(random_deviation(rng, g));
  RunOptions o = g.replay;
  const int n = g.cfg.n();
  o.perturb = [devs, n](NodeRecord& rec) {
    for (const auto& d : devs) apply(d, n, rec);
  };
  return run(g.cfg, g.m, g.sol, Profile::LimitedObservations, o);
}

Criterion nash() {
  Criterion c{"Nash identities and deviations"};
  std::mt19937_64 rng(7);

  for (const std::string file : {"i1_nonsuicidal.json", "i2_tau2p5.json"}) {
    const NashGame g = nash_game(file);
    const bool i1 = g.cfg.interaction == Interaction::I1;

    // Identities on the equilibrium and on 20 random trajectories.
    double worst = 0.0;
    for (int k = 0; k <= 20; ++k) {
      const TrajectoryLog log = k == 0 ? g.eq : random_trajectory(rng, g);
      const auto lhs = objective_eval(log, g.m, g.sol, CostKind::Adapted);
      const auto rhs = oracle::completed_square(log, g.m, g.sol);
      auto rel = [](double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); };
      if (i1) {
        worst = std::max({worst, rel(lhs.defenders, rhs.defenders), rel(lhs.target, rhs.target),
                          rel(lhs.attacker, rhs.attacker)});
      } else {
        worst = std::max(worst, rel(lhs.zero_sum, rhs.zero_sum));
      }
    }
    c.check(worst <= 1e-3, file + ": completed-square identities on 21 trajectories, worst " + fmt(worst) +
                               " <= 1e-3 (1+|V|)");

    // 100 unilateral deviations.
    const auto base = objective_eval(g.eq, g.m, g.sol, CostKind::Adapted);
    std::vector<Deviation> devs;
    for (int k = 0; k < 100; ++k) devs.push_back(random_deviation(rng, g));
    std::vector<std::future<PlayerCosts>> futures;
    std::vector<PlayerCosts> costs;
    for (std::size_t start = 0; start < devs.size(); start += threads()) {
      futures.clear();
      for (std::size_t k = start; k < std::min(devs.size(), start + threads()); ++k) {
        futures.push_back(std::async(std::launch::async, [&g, d = devs[k]] { return deviate(g, d); }));
      }
      for (auto& f : futures) costs.push_back(f.get());
    }
    int violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    const int n = g.cfg.n();
    for (std::size_t k = 0; k < devs.size(); ++k) {
      const int p = devs[k].player;
      double margin;
      if (i1) {
        margin = p < n ? costs[k].defenders - base.defenders
                       : (p == n ? costs[k].target - base.target : costs[k].attacker - base.attacker);
      } else {
        // The attacker minimizes, the pursuing team maximizes.
        margin = p == n + 1 ? costs[k].zero_sum - base.zero_sum : base.zero_sum - costs[k].zero_sum;
      }
      min_margin = std::min(min_margin, margin);
      if (margin < 0.0) ++violations;
    }
    c.check(violations == 0, file + ": " + std::to_string(violations) +
                                 " of 100 unilateral deviations improved the deviator; smallest margin " +
                                 fmt(min_margin));
  }
  return c;
}

// Regression table ------------------------------------------------------------

Criterion regression() {
  Criterion c{"Reference regression table"};
  const auto manifest = RegressionManifest::load(oracle::scenario_path("manifest.json"));
  const auto outcomes = run_regression(manifest, {}, threads());
  for (const auto& o : outcomes) {
    const auto& t = o.log.termination;
    std::string actual = t.kind_name();
    if (t.kind == TerminationRecord::Kind::Interception) actual += " d" + std::to_string(t.defender);
    std::string expected = TerminationRecord{o.expected.kind}.kind_name();
    if (o.expected.kind == TerminationRecord::Kind::Interception)
      expected += " d" + std::to_string(o.expected.defender);
    c.check(o.passed(), o.expected.id + ": expected " + expected + " at " + fixed(o.expected.time) + ", got " +
                            actual + " at " + fixed(t.time) + " (kind " + (o.kind_ok ? "ok" : "wrong") +
                            ", time " + (o.time_ok ? "ok" : "off by " + fixed(std::abs(t.time - o.expected.time))) +
                            ")");
  }
  c.note("caveat: " + manifest.caveat);
  return c;
}

// Delay -----------------------------------------------------------------------

Criterion delay() {
  Criterion c{"Visibility delay"};
  const auto cfg = oracle::scenario("i2_tau2p5.json");
  const auto r = run_paired_delay(cfg, PlayerId::defender(3), 0.6);
  auto show = [](const std::optional<double>& t) { return t ? fixed(*t) : std::string("never"); };
  c.check(r.identical_before, "zeta_d3 0.3 vs 0.6: team controls bit-identical on the first " +
                                  std::to_string(r.compared_nodes) + " nodes (first edge at " +
                                  show(r.second_edge_time) + ")");
  c.check(r.first_divergence && std::abs(*r.first_divergence - 1.305) <= 0.01 + 1e-9,
          "first divergence at " + show(r.first_divergence) + ", expected 1.305 +- 0.01");

  // Randomized pairs: both radii small enough that the varied player starts
  // out blind, so the comparison covers a non-empty prefix.
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> radius(0.2, 0.95);
  struct Pair {
    std::string file;
    PlayerId player;
    double base, other;
  };
  const std::vector<std::pair<std::string, PlayerId>> slots{{"i1_nonsuicidal.json", PlayerId::defender(2)},
                                                            {"i1_nonsuicidal.json", PlayerId::defender(3)},
                                                            {"i2_tau2p5.json", PlayerId::defender(3)},
                                                            {"i2_tau2p5.json", PlayerId::defender(2)}};
  std::vector<Pair> pairs;
  for (int k = 0; k < 12; ++k) {
    const auto& [file, player] = slots[k % slots.size()];
    pairs.push_back({file, player, radius(rng), radius(rng)});
  }
  std::vector<std::future<DelayReport>> futures;
  for (const auto& p : pairs) {
    futures.push_back(std::async(std::launch::async, [p] {
      const std::string key = "visibility_radii." + p.player.name() + "=" + std::to_string(p.base);
      return run_paired_delay(oracle::scenario(p.file, {key}), p.player, p.other);
    }));
  }
  int bad = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto rep = futures[k].get();
    if (!rep.identical_before || rep.compared_nodes == 0) ++bad;
    c.note(pairs[k].file + " " + pairs[k].player.name() + " " + fixed(pairs[k].base) + " vs " +
           fixed(pairs[k].other) + ": compared " +
           std::to_string(rep.compared_nodes) + " nodes, " + (rep.identical_before ? "identical" : "DIFFERENT") +
           ", divergence " + show(rep.first_divergence));
  }
  c.check(bad == 0, std::to_string(pairs.size() - bad) + " of " + std::to_string(pairs.size()) +
                        " randomized pairs identical on a non-empty prefix before the first edge");
  return c;
}

// Four-defender network ---------------------------------------------------------

Criterion four_defender() {
  Criterion c{"Four-defender network matrices"};
  const auto cfg = oracle::four_defender_config();
  const ReducedState z = to_reduced(Positions::from_config(cfg));
  const auto s = snapshot(z, cfg);
  Mat ad(4, 4), aug(4, 5), gate = Mat::Zero(5, 5), mix(5, 5);
  ad << 0, 1, 0, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 0;
  aug << 1, 1, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1;
  gate.diagonal() << 1, 1, 1, 1, 0;
  mix << 1, -1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1, 1, 0, 0, 0, -1, 0, 1, 0, 0, -1, 0, 0, 1;
  const Mat info = Eigen::kroneckerProduct(Mat(gate * mix), Mat::Identity(2, 2));
  c.check(s.ad == ad, "Ad(t1) equals the reference matrix");
  c.check(s.aug == aug, "augmented adjacency equals the reference matrix");
  c.check(s.info_d[1] == info, "information matrix of d2 equals the reference product");

  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    NodeGains g = NodeGains::zero(4, Interaction::I1);
    for (auto& k : g.defenders)
      for (Eigen::Index i = 0; i < k.size(); ++i) k(i) = nd(rng);
    auto Kb = [&](int j) { return Mat(g.defenders[1].middleCols(2 * j, 2)); };
    const Vec2 z1 = z.of(PlayerId::defender(1)), z2 = z.of(PlayerId::defender(2)),
               z3 = z.of(PlayerId::defender(3)), z4 = z.of(PlayerId::defender(4));
    const Vec2 expected = Kb(1) * z2 + Kb(0) * (z1 - z2) + Kb(2) * (z3 - z2) + Kb(3) * (z4 - z2);
    const Vec u = adapted_control(g, s, z.vector());
    worst = std::max(worst, (Vec2(u.segment<2>(2)) - expected).cwiseAbs().maxCoeff());
  }
  c.check(worst <= 1e-12, "u_d2 equals the four-term expansion, worst gap " + fmt(worst));
  return c;
}

}  // namespace

int main() {
  std::vector<Criterion (*)()> suite{riccati, suicidal, gradients, consistency, nash, regression, delay, four_defender};
  int failed = 0;
  for (auto fn : suite) {
    const auto t0 = std::chrono::steady_clock::now();
    const Criterion c = fn();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  [" << fixed(secs, 1) << " s]\n";
    for (const auto& d : c.details) std::cout << "    " << d << '\n';
    std::cout.flush();
    if (!c.pass) ++failed;
  }
  std::cout << (suite.size() - failed) << "/" << suite.size() << " criteria passed\n";
  return failed;
}
