#pragma once

#include "tad/model.hpp"
#include "tad/riccati.hpp"
#include "tad/strategies.hpp"
#include "tad/visibility.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace tad {

struct OptimizerSettings {
  enum class Method { Bfgs, GradientDescent };
  Method method = Method::Bfgs;
  int max_iters = 500;
  /// Stop when ||grad||_f <= grad_tol * (1 + theta).
  double grad_tol = 1e-8;
  /// Backtracking parameters, GradientDescent only.
  double armijo_c = 1e-4;
  double shrink = 0.5;
  double initial_step = 1.0;
  int max_backtracks = 60;
  /// Throw IterationLimit instead of accepting the best iterate.
  bool strict = false;
};

/// Raised in strict mode when a node does not reach the gradient tolerance.
class IterationLimit : public std::runtime_error {
 public:
  IterationLimit(const std::string& what, NodeGains best, double theta)
      : std::runtime_error(what), best_(std::move(best)), theta_(theta) {}
  const NodeGains& best() const { return best_; }
  double theta() const { return theta_; }

 private:
  NodeGains best_;
  double theta_;
};

/// gamma1 ||dQ_d||^2 + gamma2 ||dQ_tau||^2 + gamma3 ||dQ_a||^2 + gamma4 ||S1||^2.
double theta1(const GameMatrices& m, const RiccatiValue& P, const NodeGains& g,
              const VisibilitySnapshot& snap, std::span<const double> gammas);
/// gamma1 ||dQ||^2 + gamma2 ||S2||^2 + gamma3 ||S3||^2.
double theta2(const GameMatrices& m, const RiccatiValue& P, const NodeGains& g,
              const VisibilitySnapshot& snap, std::span<const double> gammas);
/// theta1 or theta2 depending on m.interaction.
double theta(const GameMatrices& m, const RiccatiValue& P, const NodeGains& g,
             const VisibilitySnapshot& snap, std::span<const double> gammas);

/// Analytic gradient with respect to every K_{d_i} (and K_tau in I2), in the
/// same layout as the gains.
NodeGains grad_theta(const GameMatrices& m, const RiccatiValue& P, const NodeGains& g,
                     const VisibilitySnapshot& snap, std::span<const double> gammas);

/// Gains reproducing the full-information equilibrium controls. Requires
/// every information matrix to be invertible.
NodeGains closed_form_gains(const GameMatrices& m, const RiccatiValue& P,
                            const VisibilitySnapshot& snap);

/// Whether every information matrix of the snapshot is invertible.
bool all_information_invertible(const VisibilitySnapshot& snap);

struct NodeSolution {
  NodeGains gains;
  double theta = 0.0;
  int iterations = 0;
  bool fast_path = false;
  bool converged = true;
};

/// Minimizes theta at one node: closed form when all information matrices are
/// invertible, otherwise BFGS with a Wolfe line search (or Armijo gradient
/// descent) started from `warm`. Gains of players with a zero information matrix are pinned to 0.
NodeSolution solve_node(const GameMatrices& m, const RiccatiValue& P,
                        const VisibilitySnapshot& snap, const NodeGains& warm,
                        std::span<const double> gammas, const OptimizerSettings& settings);

/// Gains on the whole grid for a fixed sequence of snapshots, warm-started
/// forward in time from zero.
GainSchedule solve_gains(const GameMatrices& m, const RiccatiSolution& sol,
                         std::span<const VisibilitySnapshot> snaps, const ScenarioConfig& cfg,
                         const OptimizerSettings& settings,
                         std::vector<NodeSolution>* report = nullptr);

}  // namespace tad
