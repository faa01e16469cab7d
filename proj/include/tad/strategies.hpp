#pragma once

#include "tad/model.hpp"
#include "tad/riccati.hpp"
#include "tad/visibility.hpp"

#include <vector>

namespace tad {

enum class PlayerGroup { Defenders, Target, Attacker };

/// Gains of the constrained players at one grid node. `defenders[i]` is
/// K_{d_{i+1}} in R^{2 x 2(n+1)}, partitioned as [K^{d_1} ... K^{d_n} K^tau].
/// `target` is K_tau (I2 only; empty otherwise).
struct NodeGains {
  std::vector<Mat> defenders;
  Mat target;

  static NodeGains zero(int n, Interaction mode);
  /// diag(K_{d_1}, ..., K_{d_n}).
  Mat K_d() const;
  bool operator==(const NodeGains& o) const;
};

struct GainSchedule {
  TimeGrid grid{1.0, 2};
  std::vector<NodeGains> nodes;
};

/// K_d I_d: row block i is K_{d_i} I_{d_i}.
Mat defender_feedback(const NodeGains& g, const VisibilitySnapshot& snap);
/// K_tau I_tau.
Mat target_feedback(const NodeGains& g, const VisibilitySnapshot& snap);

/// Feedback matrix L with u_group = L z under the full-information
/// equilibrium. In I2 the defender/target rows carry the maximizing team's
/// sign (+R^{-1} B' P).
Mat fne_gain(PlayerGroup group, const GameMatrices& m, const RiccatiValue& P);

/// Equilibrium control of a player group at time t. Throws
/// std::invalid_argument when the solution and the matrices disagree on the
/// interaction.
Vec fne_control(PlayerGroup group, const GameMatrices& m, const RiccatiSolution& sol, double t,
                const Vec& z);

/// Controls of the constrained players: u_{d_i} = K_{d_i} I_{d_i} z, stacked,
/// followed in I2 by u_tau = K_tau I_tau z.
Vec adapted_control(const NodeGains& g, const VisibilitySnapshot& snap, const Vec& z);

/// Matrices of the parametric performance indices.
struct PerfIndexMatrices {
  // I1
  Mat S1, dQ_d, dQ_tau, dQ_a;
  // I2
  Mat S2, S3, dQ;
};

PerfIndexMatrices perf_index_matrices(const GameMatrices& m, const RiccatiValue& P,
                                      const NodeGains& g, const VisibilitySnapshot& snap);

}  // namespace tad
