#include "tad/objectives.hpp"

#include <cmath>
#include <stdexcept>

namespace tad {

namespace {

double quad(const Vec& x, const Mat& w) { return x.dot(w * x); }

void check_grid(const TrajectoryLog& log, const RiccatiSolution& sol) {
  const auto& grid = sol.grid;
  if (static_cast<int>(log.nodes.size()) != grid.nodes()) {
    throw std::invalid_argument("trajectory does not cover the full time grid");
  }
  for (int k = 0; k < grid.nodes(); ++k) {
    if (std::abs(log.nodes[k].t - grid.time(k)) > 1e-9 * std::max(1.0, grid.horizon())) {
      throw std::invalid_argument("trajectory node times do not match the time grid");
    }
  }
}

struct Integrands {
  double d = 0.0, tau = 0.0, a = 0.0, zs = 0.0;
};

Integrands standard_integrand(const GameMatrices& m, const NodeRecord& ctl, const Vec& z) {
  Integrands r;
  if (m.interaction == Interaction::I1) {
    r.d = quad(z, m.Q_d) + quad(ctl.u_d, m.R_d);
    r.tau = quad(z, m.Q_tau) + quad(ctl.u_tau, m.R_tau);
    r.a = quad(z, m.Q_a) + quad(ctl.u_a, m.R_a);
  } else {
    r.zs = quad(z, m.Q) + quad(ctl.u_a, m.R_a) - quad(ctl.u_d, m.R_d) - quad(ctl.u_tau, m.R_tau);
  }
  return r;
}

Integrands adapted_integrand(const GameMatrices& m, const NodeRecord& ctl, const Vec& z,
                             const RiccatiValue& P) {
  const PerfIndexMatrices pm = perf_index_matrices(m, P, *ctl.gains, *ctl.snapshot);
  Integrands r;
  if (m.interaction == Interaction::I1) {
    r.d = quad(z, m.Q_d + pm.dQ_d) + quad(ctl.u_d, m.R_d) - 2.0 * ctl.u_d.dot(pm.S1 * z);
    r.tau = quad(z, m.Q_tau + pm.dQ_tau) + quad(ctl.u_tau, m.R_tau);
    r.a = quad(z, m.Q_a + pm.dQ_a) + quad(ctl.u_a, m.R_a);
  } else {
    r.zs = quad(z, m.Q + pm.dQ) + 2.0 * ctl.u_d.dot(pm.S2 * z) +
           2.0 * ctl.u_tau.dot(pm.S3 * z) + quad(ctl.u_a, m.R_a) - quad(ctl.u_d, m.R_d) -
           quad(ctl.u_tau, m.R_tau);
  }
  return r;
}

}  // namespace

PlayerCosts objective_eval(const TrajectoryLog& log, const GameMatrices& m,
                           const RiccatiSolution& sol, CostKind which) {
  if (sol.mode != m.interaction) {
    throw std::invalid_argument("Riccati solution and game matrices belong to different interactions");
  }
  check_grid(log, sol);
  const auto& grid = sol.grid;
  const int N = grid.intervals();
  const double h = grid.step();

  Integrands acc;
  for (int k = 0; k < N; ++k) {
    const NodeRecord& ctl = log.nodes[k];
    if (which == CostKind::Adapted && (!ctl.gains || !ctl.snapshot)) {
      throw std::invalid_argument("adapted costs need gains and snapshots at every node");
    }
    for (int end = 0; end < 2; ++end) {
      const Vec& z = log.nodes[k + end].z;
      const Integrands v = which == CostKind::Standard
                               ? standard_integrand(m, ctl, z)
                               : adapted_integrand(m, ctl, z, sol.node(k + end));
      acc.d += 0.5 * h * v.d;
      acc.tau += 0.5 * h * v.tau;
      acc.a += 0.5 * h * v.a;
      acc.zs += 0.5 * h * v.zs;
    }
  }

  const Vec& zT = log.nodes.back().z;
  PlayerCosts c;
  if (m.interaction == Interaction::I1) {
    c.defenders = 0.5 * quad(zT, m.F_d) + 0.5 * acc.d;
    c.target = 0.5 * quad(zT, m.F_tau) + 0.5 * acc.tau;
    c.attacker = 0.5 * quad(zT, m.F_a) + 0.5 * acc.a;
  } else {
    c.zero_sum = 0.5 * quad(zT, m.F) + 0.5 * acc.zs;
  }
  return c;
}

}  // namespace tad
