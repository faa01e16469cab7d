#pragma once

#include "tad/model.hpp"

#include <span>
#include <vector>

namespace tad {

/// Directed visibility edge from a constrained observer.
struct Edge {
  PlayerId from;
  PlayerId to;

  auto operator<=>(const Edge&) const = default;
};

/// The directed network at one instant together with the information
/// matrices that gate the constrained players' feedback.
struct VisibilitySnapshot {
  int n = 0;
  Interaction mode = Interaction::I1;
  Mat phi_a;        // n x n diagonal, d_i -> a
  Vec phi_tau_col;  // n, d_i -> tau
  Mat ad;           // n x n, d_i -> d_j, zero diagonal
  Mat aug;          // n x (n+1), [phi_a + ad, phi_tau_col]
  Vec tau_row;      // n+1, tau -> d_1..d_n, tau -> a (I2 only, empty in I1)
  std::vector<Mat> info_d;
  Mat info_tau;     // I2 only, empty in I1

  /// Sorted list of active edges out of constrained players.
  std::vector<Edge> edges() const;
  bool has_outgoing(PlayerId p) const;
  /// Every constrained player sees every other player.
  bool full_visibility() const;
  bool target_constrained() const { return mode == Interaction::I2; }
};

/// Whether constrained player p sees q: ||z_p - z_q|| <= zeta_p (z_a = 0).
/// The target in I1 sees everyone. Throws std::invalid_argument for the
/// attacker, or when p == q.
bool edge_active(PlayerId p, PlayerId q, const ReducedState& z, const ScenarioConfig& cfg);

/// Information matrix of defender i (1-based) from row i of the augmented
/// adjacency: diag(row) (I - e_i' ⊗ [1 - e_i]) ⊗ I_2.
Mat defender_information_matrix(const Vec& aug_row, int i);
/// Target information matrix from (tau -> d_1..d_n, tau -> a) indicators.
Mat target_information_matrix(const Vec& tau_row);

VisibilitySnapshot snapshot(const ReducedState& z, const ScenarioConfig& cfg);

struct TransitionEvent {
  double t = 0.0;
  Edge edge;
  bool formed = true;
};

/// Edge changes between consecutive snapshots; an event at times[k] means
/// the edge set differs between k-1 and k.
std::vector<TransitionEvent> transitions(std::span<const VisibilitySnapshot> snaps,
                                         std::span<const double> times);

}  // namespace tad
