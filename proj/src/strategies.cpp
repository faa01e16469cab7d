#include "tad/strategies.hpp"

#include <stdexcept>

namespace tad {

NodeGains NodeGains::zero(int n, Interaction mode) {
  NodeGains g;
  const int dim = 2 * (n + 1);
  g.defenders.assign(n, Mat::Zero(2, dim));
  if (mode == Interaction::I2) g.target = Mat::Zero(2, dim);
  return g;
}

Mat NodeGains::K_d() const {
  const int n = static_cast<int>(defenders.size());
  if (n == 0) return Mat();
  const int cols = static_cast<int>(defenders.front().cols());
  Mat k = Mat::Zero(2 * n, n * cols);
  for (int i = 0; i < n; ++i) k.block(2 * i, i * cols, 2, cols) = defenders[i];
  return k;
}

bool NodeGains::operator==(const NodeGains& o) const {
  if (defenders.size() != o.defenders.size()) return false;
  for (std::size_t i = 0; i < defenders.size(); ++i) {
    if (defenders[i].rows() != o.defenders[i].rows() ||
        defenders[i].cols() != o.defenders[i].cols() || defenders[i] != o.defenders[i]) {
      return false;
    }
  }
  if (target.size() != o.target.size()) return false;
  return target.size() == 0 || target == o.target;
}

Mat defender_feedback(const NodeGains& g, const VisibilitySnapshot& snap) {
  const int n = snap.n;
  const int dim = 2 * (n + 1);
  Mat out(2 * n, dim);
  for (int i = 0; i < n; ++i) out.middleRows(2 * i, 2) = g.defenders[i] * snap.info_d[i];
  return out;
}

Mat target_feedback(const NodeGains& g, const VisibilitySnapshot& snap) {
  return g.target * snap.info_tau;
}

Mat fne_gain(PlayerGroup group, const GameMatrices& m, const RiccatiValue& P) {
  if (m.interaction == Interaction::I1) {
    switch (group) {
      case PlayerGroup::Defenders:
        return -m.R_d_inv * m.B_d.transpose() * P.P_d;
      case PlayerGroup::Target:
        return -m.R_tau_inv * m.B_tau.transpose() * P.P_tau;
      case PlayerGroup::Attacker:
        return -m.R_a_inv * m.B_a.transpose() * P.P_a;
    }
  }
  switch (group) {
    case PlayerGroup::Defenders:
      return m.R_d_inv * m.B_d.transpose() * P.P;
    case PlayerGroup::Target:
      return m.R_tau_inv * m.B_tau.transpose() * P.P;
    case PlayerGroup::Attacker:
      return -m.R_a_inv * m.B_a.transpose() * P.P;
  }
  return Mat();
}

Vec fne_control(PlayerGroup group, const GameMatrices& m, const RiccatiSolution& sol, double t,
                const Vec& z) {
  if (sol.mode != m.interaction) {
    throw std::invalid_argument("Riccati solution and game matrices belong to different interactions");
  }
  return fne_gain(group, m, value_at(sol, t)) * z;
}

Vec adapted_control(const NodeGains& g, const VisibilitySnapshot& snap, const Vec& z) {
  const int n = snap.n;
  const bool with_target = snap.mode == Interaction::I2;
  Vec u(2 * n + (with_target ? 2 : 0));
  for (int i = 0; i < n; ++i) u.segment(2 * i, 2) = g.defenders[i] * (snap.info_d[i] * z);
  if (with_target) u.tail(2) = g.target * (snap.info_tau * z);
  return u;
}

PerfIndexMatrices perf_index_matrices(const GameMatrices& m, const RiccatiValue& P,
                                      const NodeGains& g, const VisibilitySnapshot& snap) {
  PerfIndexMatrices out;
  const Mat G_d = defender_feedback(g, snap);
  if (m.interaction == Interaction::I1) {
    out.S1 = m.B_d.transpose() * P.P_d + m.R_d * G_d;
    const Mat coupling = m.B_d * m.R_d_inv * out.S1;  // B_d R_d^{-1} S1
    out.dQ_tau = -P.P_tau * coupling - coupling.transpose() * P.P_tau;
    out.dQ_d = -P.P_d * m.S_d * P.P_d + G_d.transpose() * m.R_d * G_d;
    out.dQ_a = -P.P_a * coupling - coupling.transpose() * P.P_a;
  } else {
    const Mat G_tau = target_feedback(g, snap);
    out.dQ = P.P * m.S_d * P.P + P.P * m.S_tau * P.P - G_d.transpose() * m.R_d * G_d -
             G_tau.transpose() * m.R_tau * G_tau;
    out.S2 = m.R_d * G_d - m.B_d.transpose() * P.P;
    out.S3 = m.R_tau * G_tau - m.B_tau.transpose() * P.P;
  }
  return out;
}

}  // namespace tad
