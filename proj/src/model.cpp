#include "tad/model.hpp"

#include <cmath>

namespace tad {

std::string PlayerId::name() const {
  switch (kind) {
    case Kind::Defender:
      return "d" + std::to_string(index);
    case Kind::Target:
      return "tau";
    case Kind::Attacker:
      return "a";
  }
  return "?";
}

PlayerId PlayerId::parse(const std::string& s) {
  if (s == "tau") return target();
  if (s == "a") return attacker();
  if (s.size() >= 2 && s[0] == 'd') {
    int idx = 0;
    for (std::size_t k = 1; k < s.size(); ++k) {
      if (s[k] < '0' || s[k] > '9') throw ConfigError("unknown player '" + s + "'");
      idx = idx * 10 + (s[k] - '0');
    }
    if (idx >= 1) return defender(idx);
  }
  throw ConfigError("unknown player '" + s + "'");
}

std::string to_string(Interaction mode) {
  return mode == Interaction::I1 ? "I1" : "I2";
}

std::vector<double> default_gammas(Interaction mode) {
  if (mode == Interaction::I1) return {0.25, 0.25, 0.25, 0.25};
  return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
}

int ScenarioConfig::intervals() const {
  return static_cast<int>(std::llround(horizon / step));
}

Vec2 ScenarioConfig::position(PlayerId p) const {
  switch (p.kind) {
    case PlayerId::Kind::Defender:
      return defenders.at(p.index - 1).position;
    case PlayerId::Kind::Target:
      return target.position;
    case PlayerId::Kind::Attacker:
      return attacker.position;
  }
  return Vec2::Zero();
}

VisibilityRadius ScenarioConfig::visibility(PlayerId p) const {
  switch (p.kind) {
    case PlayerId::Kind::Defender:
      return defenders.at(p.index - 1).visibility;
    case PlayerId::Kind::Target:
      return target.visibility;
    case PlayerId::Kind::Attacker:
      return VisibilityRadius::unbounded();
  }
  return VisibilityRadius::unbounded();
}

namespace {

void require_positive(double v, const std::string& path) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(path + ": must be a finite positive number");
  }
}

void require_weights(const PairWeights& w, const std::string& path) {
  require_positive(w.f_pa, path + ".f_pa");
  require_positive(w.f_ap, path + ".f_ap");
  require_positive(w.q_pa, path + ".q_pa");
  require_positive(w.q_ap, path + ".q_ap");
}

}  // namespace

void ScenarioConfig::validate() const {
  if (defenders.empty()) throw ConfigError("n: at least one defender is required");
  for (int i = 0; i < n(); ++i) {
    const auto& d = defenders[i];
    const std::string id = "d" + std::to_string(i + 1);
    if (!d.position.allFinite()) throw ConfigError("initial_positions." + id + ": not finite");
    require_positive(d.capture_radius, "capture_radii." + id);
    if (d.visibility.is_unbounded()) {
      throw ConfigError("visibility_radii." + id + ": defenders need a finite radius");
    }
    require_positive(d.visibility.value(), "visibility_radii." + id);
    if (d.capture_radius >= d.visibility.value()) {
      throw ConfigError("capture_radii." + id + ": must be smaller than visibility_radii." + id);
    }
    require_weights(d.weights, "weights." + id);
    require_positive(d.control_penalty, "control_penalties." + id);
  }
  if (!target.position.allFinite()) throw ConfigError("initial_positions.tau: not finite");
  if (!attacker.position.allFinite()) throw ConfigError("initial_positions.a: not finite");
  if (!target.visibility.is_unbounded()) {
    require_positive(target.visibility.value(), "visibility_radii.tau");
  }
  require_weights(target.weights, "weights.tau");
  require_positive(target.control_penalty, "control_penalties.tau");
  require_positive(attacker.control_penalty, "control_penalties.a");
  require_positive(attacker.capture_radius, "capture_radii.a");

  if (lambda != 0 && lambda != 1) throw ConfigError("lambda: must be 0 or 1");
  if (interaction == Interaction::I2 && lambda != 1) {
    throw ConfigError("lambda: interaction I2 requires a non-suicidal attacker (lambda = 1)");
  }
  require_positive(horizon, "horizon");
  require_positive(step, "step");
  const double ratio = horizon / step;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigError("step: horizon / step must be an integer");
  }
  if (intervals() < 2) throw ConfigError("step: the time grid needs at least two intervals");

  const std::size_t expected = interaction == Interaction::I1 ? 4 : 3;
  if (gamma_weights.size() != expected) {
    throw ConfigError("gamma_weights: expected " + std::to_string(expected) + " entries for " +
                      to_string(interaction));
  }
  for (std::size_t k = 0; k < gamma_weights.size(); ++k) {
    const double g = gamma_weights[k];
    if (!(g >= 0.0 && g <= 1.0)) {
      throw ConfigError("gamma_weights[" + std::to_string(k) + "]: must lie in [0, 1]");
    }
  }
}

Mat GameMatrices::B_defender(int i) const {
  Mat b = Mat::Zero(dim, 2);
  b.block(2 * i, 0, 2, 2).setIdentity();
  return b;
}

namespace {

// diag(values) ⊗ I_2
Mat kron_diag_i2(const std::vector<double>& values) {
  const int m = static_cast<int>(values.size());
  Mat out = Mat::Zero(2 * m, 2 * m);
  for (int k = 0; k < m; ++k) {
    out(2 * k, 2 * k) = values[k];
    out(2 * k + 1, 2 * k + 1) = values[k];
  }
  return out;
}

}  // namespace

GameMatrices build_matrices(const ScenarioConfig& cfg) {
  cfg.validate();
  GameMatrices m;
  const int n = cfg.n();
  const int dim = cfg.dim();
  const double lambda = cfg.lambda;
  m.n = n;
  m.dim = dim;
  m.interaction = cfg.interaction;

  m.B_d = Mat::Zero(dim, 2 * n);
  m.B_d.topLeftCorner(2 * n, 2 * n).setIdentity();
  m.B_tau = Mat::Zero(dim, 2);
  m.B_tau.bottomRows(2).setIdentity();
  m.B_a = Mat::Zero(dim, 2);
  for (int k = 0; k <= n; ++k) m.B_a.block(2 * k, 0, 2, 2) = -Eigen::Matrix2d::Identity();
  m.B_dtau = Mat::Zero(dim, 2 * n + 2);
  m.B_dtau << m.B_d, m.B_tau;

  std::vector<double> fd, qd, fa, qa, f_zs, q_zs, rd;
  for (const auto& d : cfg.defenders) {
    fd.push_back(d.weights.f_pa);
    qd.push_back(d.weights.q_pa);
    fa.push_back(-lambda * d.weights.f_ap);
    qa.push_back(-lambda * d.weights.q_ap);
    f_zs.push_back(-d.weights.f_ap);
    q_zs.push_back(-d.weights.q_ap);
    rd.push_back(d.control_penalty);
  }
  const auto& tw = cfg.target.weights;
  fd.push_back(0.0);
  qd.push_back(0.0);
  fa.push_back(tw.f_ap);
  qa.push_back(tw.q_ap);
  f_zs.push_back(tw.f_ap);
  q_zs.push_back(tw.q_ap);

  std::vector<double> f_tau(n + 1, 0.0), q_tau(n + 1, 0.0);
  f_tau[n] = -tw.f_pa;
  q_tau[n] = -tw.q_pa;

  m.F_d = kron_diag_i2(fd);
  m.Q_d = kron_diag_i2(qd);
  m.F_tau = kron_diag_i2(f_tau);
  m.Q_tau = kron_diag_i2(q_tau);
  m.F_a = kron_diag_i2(fa);
  m.Q_a = kron_diag_i2(qa);
  m.F = kron_diag_i2(f_zs);
  m.Q = kron_diag_i2(q_zs);

  m.R_d = kron_diag_i2(rd);
  m.R_tau = cfg.target.control_penalty * Mat::Identity(2, 2);
  m.R_a = cfg.attacker.control_penalty * Mat::Identity(2, 2);
  std::vector<double> rdt = rd;
  rdt.push_back(cfg.target.control_penalty);
  m.R_dtau = kron_diag_i2(rdt);

  auto inv_diag = [](const Mat& r) {
    return Mat(r.diagonal().cwiseInverse().asDiagonal());
  };
  m.R_d_inv = inv_diag(m.R_d);
  m.R_tau_inv = inv_diag(m.R_tau);
  m.R_a_inv = inv_diag(m.R_a);
  m.R_dtau_inv = inv_diag(m.R_dtau);

  m.S_d = m.B_d * m.R_d_inv * m.B_d.transpose();
  m.S_tau = m.B_tau * m.R_tau_inv * m.B_tau.transpose();
  m.S_a = m.B_a * m.R_a_inv * m.B_a.transpose();
  m.S_dtau = m.S_d + m.S_tau;
  return m;
}

Vec2 Positions::of(PlayerId p) const {
  switch (p.kind) {
    case PlayerId::Kind::Defender:
      return defenders.at(p.index - 1);
    case PlayerId::Kind::Target:
      return target;
    case PlayerId::Kind::Attacker:
      return attacker;
  }
  return Vec2::Zero();
}

Positions Positions::from_config(const ScenarioConfig& cfg) {
  Positions p;
  for (const auto& d : cfg.defenders) p.defenders.push_back(d.position);
  p.target = cfg.target.position;
  p.attacker = cfg.attacker.position;
  return p;
}

Positions Positions::from_map(const std::map<PlayerId, Vec2>& m, int n) {
  auto get = [&](PlayerId id) {
    auto it = m.find(id);
    if (it == m.end()) throw ConfigError("initial_positions." + id.name() + ": missing");
    return it->second;
  };
  Positions p;
  for (int i = 1; i <= n; ++i) p.defenders.push_back(get(PlayerId::defender(i)));
  p.target = get(PlayerId::target());
  p.attacker = get(PlayerId::attacker());
  return p;
}

ReducedState::ReducedState(Vec z) : z_(std::move(z)) {
  if (z_.size() < 4 || z_.size() % 2 != 0) {
    throw std::invalid_argument("reduced state must have dimension 2(n+1) with n >= 1");
  }
}

Vec2 ReducedState::of(PlayerId p) const {
  switch (p.kind) {
    case PlayerId::Kind::Defender:
      if (p.index < 1 || p.index > n()) throw std::out_of_range("defender index out of range");
      return z_.segment<2>(2 * (p.index - 1));
    case PlayerId::Kind::Target:
      return z_.segment<2>(2 * n());
    case PlayerId::Kind::Attacker:
      return Vec2::Zero();
  }
  return Vec2::Zero();
}

ReducedState to_reduced(const Positions& pos) {
  const int n = static_cast<int>(pos.defenders.size());
  Vec z(2 * (n + 1));
  for (int i = 0; i < n; ++i) z.segment<2>(2 * i) = pos.defenders[i] - pos.attacker;
  z.segment<2>(2 * n) = pos.target - pos.attacker;
  return ReducedState(std::move(z));
}

Positions from_reduced(const ReducedState& z, const Vec2& attacker) {
  const int n = z.n();
  Positions pos;
  pos.attacker = attacker;
  for (int i = 1; i <= n; ++i) pos.defenders.push_back(z.of(PlayerId::defender(i)) + attacker);
  pos.target = z.of(PlayerId::target()) + attacker;
  return pos;
}

}  // namespace tad
