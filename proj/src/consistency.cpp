#include "tad/consistency.hpp"

#include <ceres/ceres.h>

#include <cmath>
#include <sstream>

namespace tad {

namespace {

void require_gammas(std::span<const double> gammas, std::size_t count) {
  if (gammas.size() != count) {
    throw std::invalid_argument("expected " + std::to_string(count) + " gamma weights");
  }
}

bool is_zero(const Mat& m) { return m.size() == 0 || m.isZero(0.0); }

double frob2(const Mat& m) { return m.squaredNorm(); }

// Sum of squared Frobenius norms over all gain blocks.
double norm2(const NodeGains& g) {
  double s = 0.0;
  for (const auto& k : g.defenders) s += k.squaredNorm();
  if (g.target.size() > 0) s += g.target.squaredNorm();
  return s;
}

NodeGains step_along(const NodeGains& x, double alpha, const NodeGains& dir) {
  NodeGains out = x;
  for (std::size_t i = 0; i < out.defenders.size(); ++i) out.defenders[i] -= alpha * dir.defenders[i];
  if (out.target.size() > 0) out.target -= alpha * dir.target;
  return out;
}

void pin_isolated(NodeGains& g, const VisibilitySnapshot& snap) {
  for (int i = 0; i < snap.n; ++i) {
    if (is_zero(snap.info_d[i])) g.defenders[i].setZero();
  }
  if (snap.mode == Interaction::I2 && is_zero(snap.info_tau)) g.target.setZero();
}

// Free gain blocks, flattened column-major into one parameter vector.
struct GainLayout {
  std::vector<int> defenders;  // indices of unpinned defenders
  bool target = false;
  int size = 0;

  GainLayout(const NodeGains& g, const VisibilitySnapshot& snap) {
    for (int i = 0; i < snap.n; ++i) {
      if (!is_zero(snap.info_d[i])) {
        defenders.push_back(i);
        size += static_cast<int>(g.defenders[i].size());
      }
    }
    if (snap.mode == Interaction::I2 && !is_zero(snap.info_tau)) {
      target = true;
      size += static_cast<int>(g.target.size());
    }
  }

  void scatter(const double* x, NodeGains& g) const {
    for (int i : defenders) {
      Eigen::Map<const Mat> v(x, g.defenders[i].rows(), g.defenders[i].cols());
      g.defenders[i] = v;
      x += g.defenders[i].size();
    }
    if (target) g.target = Eigen::Map<const Mat>(x, g.target.rows(), g.target.cols());
  }

  void gather(const NodeGains& g, double* x) const {
    for (int i : defenders) {
      Eigen::Map<Mat>(x, g.defenders[i].rows(), g.defenders[i].cols()) = g.defenders[i];
      x += g.defenders[i].size();
    }
    if (target) Eigen::Map<Mat>(x, g.target.rows(), g.target.cols()) = g.target;
  }
};

class ThetaObjective : public ceres::FirstOrderFunction {
 public:
  ThetaObjective(const GameMatrices& m, const RiccatiValue& P, const VisibilitySnapshot& snap,
                 std::span<const double> gammas, const GainLayout& layout, NodeGains shape)
      : m_(m), P_(P), snap_(snap), gammas_(gammas), layout_(layout), work_(std::move(shape)) {}

  bool Evaluate(const double* x, double* cost, double* gradient) const override {
    layout_.scatter(x, work_);
    *cost = theta(m_, P_, work_, snap_, gammas_);
    if (gradient) layout_.gather(grad_theta(m_, P_, work_, snap_, gammas_), gradient);
    return std::isfinite(*cost);
  }
  int NumParameters() const override { return layout_.size; }

 private:
  const GameMatrices& m_;
  const RiccatiValue& P_;
  const VisibilitySnapshot& snap_;
  std::span<const double> gammas_;
  const GainLayout& layout_;
  mutable NodeGains work_;
};

}  // namespace

double theta1(const GameMatrices& m, const RiccatiValue& P, const NodeGains& g,
              const VisibilitySnapshot& snap, std::span<const double> gammas) {
  require_gammas(gammas, 4);
  const PerfIndexMatrices pm = perf_index_matrices(m, P, g, snap);
  return gammas[0] * frob2(pm.dQ_d) + gammas[1] * frob2(pm.dQ_tau) + gammas[2] * frob2(pm.dQ_a) +
         gammas[3] * frob2(pm.S1);
}

double theta2(const GameMatrices& m, const RiccatiValue& P, const NodeGains& g,
              const VisibilitySnapshot& snap, std::span<const double> gammas) {
  require_gammas(gammas, 3);
  const PerfIndexMatrices pm = perf_index_matrices(m, P, g, snap);
  return gammas[0] * frob2(pm.dQ) + gammas[1] * frob2(pm.S2) + gammas[2] * frob2(pm.S3);
}

double theta(const GameMatrices& m, const RiccatiValue& P, const NodeGains& g,
             const VisibilitySnapshot& snap, std::span<const double> gammas) {
  return m.interaction == Interaction::I1 ? theta1(m, P, g, snap, gammas)
                                          : theta2(m, P, g, snap, gammas);
}

NodeGains grad_theta(const GameMatrices& m, const RiccatiValue& P, const NodeGains& g,
                     const VisibilitySnapshot& snap, std::span<const double> gammas) {
  const PerfIndexMatrices pm = perf_index_matrices(m, P, g, snap);
  const Mat G_d = defender_feedback(g, snap);
  NodeGains grad;
  grad.defenders.resize(snap.n);

  Mat joint;  // gradient with respect to the stacked feedback K_d I_d
  if (m.interaction == Interaction::I1) {
    require_gammas(gammas, 4);
    joint = 4.0 * gammas[0] * m.R_d * G_d * pm.dQ_d -
            4.0 * gammas[1] * m.B_d.transpose() * P.P_tau * pm.dQ_tau -
            4.0 * gammas[2] * m.B_d.transpose() * P.P_a * pm.dQ_a + 2.0 * gammas[3] * m.R_d * pm.S1;
  } else {
    require_gammas(gammas, 3);
    joint = -4.0 * gammas[0] * m.R_d * G_d * pm.dQ + 2.0 * gammas[1] * m.R_d * pm.S2;
    const Mat G_tau = target_feedback(g, snap);
    grad.target = (-4.0 * gammas[0] * m.R_tau * G_tau * pm.dQ + 2.0 * gammas[2] * m.R_tau * pm.S3) *
                  snap.info_tau.transpose();
  }
  for (int i = 0; i < snap.n; ++i) {
    grad.defenders[i] = joint.middleRows(2 * i, 2) * snap.info_d[i].transpose();
  }
  return grad;
}

bool all_information_invertible(const VisibilitySnapshot& snap) {
  auto invertible = [](const Mat& info) {
    return info.size() > 0 && std::abs(info.fullPivLu().determinant()) > 0.5;
  };
  for (const auto& info : snap.info_d) {
    if (!invertible(info)) return false;
  }
  if (snap.mode == Interaction::I2 && !invertible(snap.info_tau)) return false;
  return true;
}

NodeGains closed_form_gains(const GameMatrices& m, const RiccatiValue& P,
                            const VisibilitySnapshot& snap) {
  NodeGains g;
  g.defenders.resize(snap.n);
  const Mat team = fne_gain(PlayerGroup::Defenders, m, P);
  for (int i = 0; i < snap.n; ++i) {
    g.defenders[i] = team.middleRows(2 * i, 2) * snap.info_d[i].inverse();
  }
  if (m.interaction == Interaction::I2) {
    g.target = fne_gain(PlayerGroup::Target, m, P) * snap.info_tau.inverse();
  }
  return g;
}

NodeSolution solve_node(const GameMatrices& m, const RiccatiValue& P,
                        const VisibilitySnapshot& snap, const NodeGains& warm,
                        std::span<const double> gammas, const OptimizerSettings& settings) {
  NodeSolution out;
  if (all_information_invertible(snap)) {
    out.gains = closed_form_gains(m, P, snap);
    out.theta = theta(m, P, out.gains, snap, gammas);
    out.fast_path = true;
    return out;
  }

  NodeGains x = warm;
  pin_isolated(x, snap);
  int it = 0;
  bool stalled = false;
  if (settings.method == OptimizerSettings::Method::Bfgs) {
    const GainLayout layout(x, snap);
    stalled = layout.size == 0;
    if (layout.size > 0) {
      std::vector<double> params(layout.size);
      layout.gather(x, params.data());
      ceres::GradientProblem problem(new ThetaObjective(m, P, snap, gammas, layout, x));
      ceres::GradientProblemSolver::Options opts;
      opts.line_search_direction_type = ceres::BFGS;
      opts.max_num_iterations = settings.max_iters;
      opts.gradient_tolerance = 0.0;
      opts.function_tolerance = 1e-15;
      opts.parameter_tolerance = 1e-15;
      opts.logging_type = ceres::SILENT;
      ceres::GradientProblemSolver::Summary summary;
      ceres::Solve(opts, problem, params.data(), &summary);
      layout.scatter(params.data(), x);
      it = static_cast<int>(summary.iterations.size()) - 1;
      stalled = summary.termination_type == ceres::CONVERGENCE;
    }
  } else {
    double f = theta(m, P, x, snap, gammas);
    for (; it < settings.max_iters; ++it) {
      const NodeGains grad = grad_theta(m, P, x, snap, gammas);
      const double g2 = norm2(grad);
      if (std::sqrt(g2) <= settings.grad_tol * (1.0 + f)) break;
      double alpha = settings.initial_step;
      bool accepted = false;
      for (int b = 0; b < settings.max_backtracks; ++b) {
        NodeGains trial = step_along(x, alpha, grad);
        const double ft = theta(m, P, trial, snap, gammas);
        if (ft <= f - settings.armijo_c * alpha * g2) {
          x = std::move(trial);
          f = ft;
          accepted = true;
          break;
        }
        alpha *= settings.shrink;
      }
      if (!accepted) {
        stalled = true;
        break;
      }
    }
  }
  const double f = theta(m, P, x, snap, gammas);
  const double g = std::sqrt(norm2(grad_theta(m, P, x, snap, gammas)));
  // A function/parameter stall or a failed backtrack means the iterate is
  // stationary at working precision, so it counts as convergence too.
  out.converged = g <= settings.grad_tol * (1.0 + f) || stalled;
  out.gains = std::move(x);
  out.theta = f;
  out.iterations = it;
  if (!out.converged && settings.strict) {
    std::ostringstream os;
    os << "gain optimization did not converge in " << settings.max_iters
       << " iterations (theta = " << f << ")";
    throw IterationLimit(os.str(), out.gains, f);
  }
  return out;
}

GainSchedule solve_gains(const GameMatrices& m, const RiccatiSolution& sol,
                         std::span<const VisibilitySnapshot> snaps, const ScenarioConfig& cfg,
                         const OptimizerSettings& settings, std::vector<NodeSolution>* report) {
  const auto& grid = sol.grid;
  if (static_cast<int>(snaps.size()) > grid.nodes()) {
    throw std::invalid_argument("more snapshots than grid nodes");
  }
  GainSchedule schedule;
  schedule.grid = grid;
  NodeGains warm = NodeGains::zero(cfg.n(), cfg.interaction);
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    NodeSolution s =
        solve_node(m, sol.node(static_cast<int>(k)), snaps[k], warm, cfg.gamma_weights, settings);
    warm = s.gains;
    schedule.nodes.push_back(s.gains);
    if (report) report->push_back(std::move(s));
  }
  return schedule;
}

}  // namespace tad
