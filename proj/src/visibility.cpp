#include "tad/visibility.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace tad {

bool edge_active(PlayerId p, PlayerId q, const ReducedState& z, const ScenarioConfig& cfg) {
  if (p.is_attacker()) throw std::invalid_argument("the attacker is not visibility constrained");
  if (p == q) throw std::invalid_argument("a player has no edge to itself");
  const VisibilityRadius radius = cfg.visibility(p);
  if (radius.is_unbounded()) return true;
  return radius.covers((z.of(p) - z.of(q)).norm());
}

Mat defender_information_matrix(const Vec& aug_row, int i) {
  const int m = static_cast<int>(aug_row.size());  // n + 1
  const int self = i - 1;
  // I - (1 - e_i) e_i': column i becomes -1 everywhere except the diagonal.
  Mat mix = Mat::Identity(m, m);
  for (int r = 0; r < m; ++r) {
    if (r != self) mix(r, self) = -1.0;
  }
  const Mat gated = aug_row.asDiagonal() * mix;
  return Eigen::kroneckerProduct(gated, Mat::Identity(2, 2));
}

Mat target_information_matrix(const Vec& tau_row) {
  const int m = static_cast<int>(tau_row.size());
  const int self = m - 1;
  Mat mix = Mat::Identity(m, m);
  for (int r = 0; r < self; ++r) mix(r, self) = -1.0;
  const Mat gated = tau_row.asDiagonal() * mix;
  return Eigen::kroneckerProduct(gated, Mat::Identity(2, 2));
}

VisibilitySnapshot snapshot(const ReducedState& z, const ScenarioConfig& cfg) {
  const int n = cfg.n();
  VisibilitySnapshot s;
  s.n = n;
  s.mode = cfg.interaction;
  s.phi_a = Mat::Zero(n, n);
  s.phi_tau_col = Vec::Zero(n);
  s.ad = Mat::Zero(n, n);
  for (int i = 1; i <= n; ++i) {
    const PlayerId d = PlayerId::defender(i);
    s.phi_a(i - 1, i - 1) = edge_active(d, PlayerId::attacker(), z, cfg) ? 1.0 : 0.0;
    s.phi_tau_col(i - 1) = edge_active(d, PlayerId::target(), z, cfg) ? 1.0 : 0.0;
    for (int j = 1; j <= n; ++j) {
      if (j == i) continue;
      s.ad(i - 1, j - 1) = edge_active(d, PlayerId::defender(j), z, cfg) ? 1.0 : 0.0;
    }
  }
  s.aug = Mat::Zero(n, n + 1);
  s.aug.leftCols(n) = s.phi_a + s.ad;
  s.aug.col(n) = s.phi_tau_col;

  s.info_d.reserve(n);
  for (int i = 1; i <= n; ++i) {
    s.info_d.push_back(defender_information_matrix(s.aug.row(i - 1).transpose(), i));
  }

  if (cfg.interaction == Interaction::I2) {
    s.tau_row = Vec::Zero(n + 1);
    for (int j = 1; j <= n; ++j) {
      s.tau_row(j - 1) = edge_active(PlayerId::target(), PlayerId::defender(j), z, cfg) ? 1.0 : 0.0;
    }
    s.tau_row(n) = edge_active(PlayerId::target(), PlayerId::attacker(), z, cfg) ? 1.0 : 0.0;
    s.info_tau = target_information_matrix(s.tau_row);
  }
  return s;
}

std::vector<Edge> VisibilitySnapshot::edges() const {
  std::vector<Edge> out;
  for (int i = 1; i <= n; ++i) {
    const PlayerId d = PlayerId::defender(i);
    for (int j = 1; j <= n; ++j) {
      if (j != i && ad(i - 1, j - 1) != 0.0) out.push_back({d, PlayerId::defender(j)});
    }
    if (phi_tau_col(i - 1) != 0.0) out.push_back({d, PlayerId::target()});
    if (phi_a(i - 1, i - 1) != 0.0) out.push_back({d, PlayerId::attacker()});
  }
  if (target_constrained()) {
    for (int j = 1; j <= n; ++j) {
      if (tau_row(j - 1) != 0.0) out.push_back({PlayerId::target(), PlayerId::defender(j)});
    }
    if (tau_row(n) != 0.0) out.push_back({PlayerId::target(), PlayerId::attacker()});
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool VisibilitySnapshot::has_outgoing(PlayerId p) const {
  if (p.is_defender()) return aug.row(p.index - 1).sum() > 0.0;
  if (p.is_target() && target_constrained()) return tau_row.sum() > 0.0;
  return false;
}

bool VisibilitySnapshot::full_visibility() const {
  if ((aug.array() != 1.0).any()) return false;
  if (target_constrained() && (tau_row.array() != 1.0).any()) return false;
  return true;
}

std::vector<TransitionEvent> transitions(std::span<const VisibilitySnapshot> snaps,
                                         std::span<const double> times) {
  if (snaps.size() != times.size()) {
    throw std::invalid_argument("snapshot and time sequences differ in length");
  }
  std::vector<TransitionEvent> events;
  for (std::size_t k = 1; k < snaps.size(); ++k) {
    const auto before = snaps[k - 1].edges();
    const auto after = snaps[k].edges();
    std::vector<Edge> formed, broken;
    std::set_difference(after.begin(), after.end(), before.begin(), before.end(),
                        std::back_inserter(formed));
    std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                        std::back_inserter(broken));
    for (const auto& e : formed) events.push_back({times[k], e, true});
    for (const auto& e : broken) events.push_back({times[k], e, false});
  }
  std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.edge < b.edge;
  });
  return events;
}

}  // namespace tad
