#include "tad/riccati.hpp"

#include <cmath>
#include <sstream>

namespace tad {

TimeGrid::TimeGrid(double step, int intervals) : step_(step), intervals_(intervals) {
  if (!(step > 0.0)) throw std::invalid_argument("time grid step must be positive");
  if (intervals < 2) throw std::invalid_argument("time grid needs at least two intervals");
}

TimeGrid TimeGrid::from_config(const ScenarioConfig& cfg) {
  return TimeGrid(cfg.step, cfg.intervals());
}

std::optional<int> TimeGrid::node_at(double t) const {
  const double scaled = t / step_;
  const double nearest = std::round(scaled);
  if (nearest < 0 || nearest > intervals_) return std::nullopt;
  if (std::abs(t - nearest * step_) <= 0.5 * step_ * 1e-6) return static_cast<int>(nearest);
  return std::nullopt;
}

int TimeGrid::floor_node(double t) const {
  if (auto k = node_at(t)) return *k;
  int k = static_cast<int>(std::floor(t / step_));
  if (k < 0) k = 0;
  if (k > intervals_) k = intervals_;
  return k;
}

RiccatiValue RiccatiSolution::node(int k) const {
  RiccatiValue v;
  if (mode == Interaction::I1) {
    v.P_d = P_d.at(k);
    v.P_tau = P_tau.at(k);
    v.P_a = P_a.at(k);
  } else {
    v.P = P.at(k);
  }
  return v;
}

std::array<Mat, 3> nzs_rhs(const GameMatrices& m, const Mat& P_d, const Mat& P_tau,
                           const Mat& P_a) {
  // Products S_p P_p appear in all three equations.
  const Mat SdPd = m.S_d * P_d;
  const Mat StPt = m.S_tau * P_tau;
  const Mat SaPa = m.S_a * P_a;
  std::array<Mat, 3> out;
  out[0] = P_d * SdPd + P_d * StPt + P_d * SaPa + P_tau * m.S_tau * P_d + P_a * m.S_a * P_d - m.Q_d;
  out[1] = P_tau * SdPd + P_tau * StPt + P_tau * SaPa + P_d * m.S_d * P_tau + P_a * m.S_a * P_tau -
           m.Q_tau;
  out[2] = P_a * SdPd + P_a * StPt + P_a * SaPa + P_d * m.S_d * P_a + P_tau * m.S_tau * P_a - m.Q_a;
  return out;
}

Mat zs_rhs(const GameMatrices& m, const Mat& P) {
  return -m.Q + P * (m.S_a - m.S_dtau) * P;
}

namespace {

template <std::size_t K>
using MatPack = std::array<Mat, K>;

template <std::size_t K>
MatPack<K> axpy(const MatPack<K>& x, double h, const MatPack<K>& dx) {
  MatPack<K> out;
  for (std::size_t i = 0; i < K; ++i) out[i] = symmetrized(x[i] + h * dx[i]);
  return out;
}

template <std::size_t K>
void check_escape(const MatPack<K>& x, double t) {
  for (const auto& m : x) {
    if (!m.allFinite() || m.cwiseAbs().maxCoeff() > kEscapeThreshold) {
      std::ostringstream os;
      os << "Riccati solution escapes at t = " << t
         << "; no feedback equilibrium exists on this horizon";
      throw FiniteEscape(os.str(), t);
    }
  }
}

// Backward RK4 in reversed time s = T - t, so dX/ds = -f(X). Every stage
// argument and every accepted step is symmetrized.
template <std::size_t K, typename Rhs>
std::vector<MatPack<K>> integrate_backward(const MatPack<K>& terminal, const TimeGrid& grid,
                                           Rhs&& rhs) {
  const int N = grid.intervals();
  const double h = grid.step();
  std::vector<MatPack<K>> nodes(N + 1);
  nodes[N] = terminal;
  auto f = [&](const MatPack<K>& x) {
    MatPack<K> d = rhs(x);
    for (auto& di : d) di = -di;
    return d;
  };
  for (int k = N; k > 0; --k) {
    const MatPack<K>& x = nodes[k];
    const MatPack<K> k1 = f(x);
    const MatPack<K> k2 = f(axpy(x, 0.5 * h, k1));
    const MatPack<K> k3 = f(axpy(x, 0.5 * h, k2));
    const MatPack<K> k4 = f(axpy(x, h, k3));
    MatPack<K> next;
    for (std::size_t i = 0; i < K; ++i) {
      next[i] = symmetrized(x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    check_escape(next, grid.time(k - 1));
    nodes[k - 1] = std::move(next);
  }
  return nodes;
}

}  // namespace

RiccatiSolution solve_nzs(const GameMatrices& m, const TimeGrid& grid) {
  const MatPack<3> terminal{m.F_d, m.F_tau, m.F_a};
  auto nodes = integrate_backward<3>(terminal, grid, [&](const MatPack<3>& x) {
    return nzs_rhs(m, x[0], x[1], x[2]);
  });
  RiccatiSolution sol;
  sol.grid = grid;
  sol.mode = Interaction::I1;
  sol.P_d.reserve(nodes.size());
  sol.P_tau.reserve(nodes.size());
  sol.P_a.reserve(nodes.size());
  for (auto& x : nodes) {
    sol.P_d.push_back(std::move(x[0]));
    sol.P_tau.push_back(std::move(x[1]));
    sol.P_a.push_back(std::move(x[2]));
  }
  return sol;
}

RiccatiSolution solve_zs(const GameMatrices& m, const TimeGrid& grid) {
  const MatPack<1> terminal{m.F};
  auto nodes = integrate_backward<1>(terminal, grid, [&](const MatPack<1>& x) {
    return MatPack<1>{zs_rhs(m, x[0])};
  });
  RiccatiSolution sol;
  sol.grid = grid;
  sol.mode = Interaction::I2;
  sol.P.reserve(nodes.size());
  for (auto& x : nodes) sol.P.push_back(std::move(x[0]));
  return sol;
}

RiccatiSolution solve(const GameMatrices& m, const TimeGrid& grid) {
  return m.interaction == Interaction::I1 ? solve_nzs(m, grid) : solve_zs(m, grid);
}

std::array<double, 6> suicidal_rhs(const ScenarioConfig& cfg, const std::array<double, 6>& k) {
  const double q_t = cfg.target.weights.q_pa;
  const double q_at = cfg.target.weights.q_ap;
  const double rt = 1.0 / cfg.target.control_penalty;
  const double ra = 1.0 / cfg.attacker.control_penalty;
  const auto [k1, k2, k3, k4, k5, k6] = k;
  return {
      q_t + rt * (k1 * k1 + k2 * k2) + 2.0 * ra * (k1 * k4 + k2 * k5),
      rt * k2 * (k1 + k3) + ra * (k2 * (k4 + k6) + k5 * (k1 + k3)),
      q_t + rt * (k2 * k2 + k3 * k3) + 2.0 * ra * (k2 * k5 + k3 * k6),
      -q_at + ra * (k4 * k4 + k5 * k5) + 2.0 * rt * (k1 * k4 + k2 * k5),
      ra * k5 * (k4 + k6) + rt * (k2 * (k4 + k6) + k5 * (k1 + k3)),
      -q_at + ra * (k5 * k5 + k6 * k6) + 2.0 * rt * (k2 * k5 + k3 * k6),
  };
}

SuicidalReducedSolution solve_suicidal_reduced(const ScenarioConfig& cfg, const TimeGrid& grid) {
  if (cfg.lambda != 0) {
    throw std::invalid_argument("the reduced suicidal-attacker system requires lambda = 0");
  }
  using K6 = std::array<double, 6>;
  const int N = grid.intervals();
  const double h = grid.step();
  const double f_ta = cfg.target.weights.f_pa;
  const double f_at = cfg.target.weights.f_ap;

  SuicidalReducedSolution sol;
  sol.grid = grid;
  sol.k.resize(N + 1);
  sol.k[N] = {-f_ta, 0.0, -f_ta, f_at, 0.0, f_at};

  auto f = [&](const K6& x) {
    K6 d = suicidal_rhs(cfg, x);
    for (double& v : d) v = -v;
    return d;
  };
  auto shifted = [](const K6& x, double a, const K6& dx) {
    K6 out;
    for (int i = 0; i < 6; ++i) out[i] = x[i] + a * dx[i];
    return out;
  };
  for (int k = N; k > 0; --k) {
    const K6& x = sol.k[k];
    const K6 s1 = f(x);
    const K6 s2 = f(shifted(x, 0.5 * h, s1));
    const K6 s3 = f(shifted(x, 0.5 * h, s2));
    const K6 s4 = f(shifted(x, h, s3));
    K6 next;
    for (int i = 0; i < 6; ++i) {
      next[i] = x[i] + (h / 6.0) * (s1[i] + 2.0 * s2[i] + 2.0 * s3[i] + s4[i]);
      if (!std::isfinite(next[i]) || std::abs(next[i]) > kEscapeThreshold) {
        throw FiniteEscape("reduced suicidal-attacker system escapes", grid.time(k - 1));
      }
    }
    sol.k[k - 1] = next;
  }
  return sol;
}

RiccatiValue value_at(const RiccatiSolution& sol, double t) {
  const auto& grid = sol.grid;
  const double T = grid.horizon();
  const double tol = 0.5 * grid.step() * 1e-6;
  if (!(t >= -tol && t <= T + tol)) throw std::out_of_range("time outside the solution horizon");
  if (auto k = grid.node_at(t)) return sol.node(*k);

  const int k0 = grid.floor_node(t);
  const int k1 = std::min(k0 + 1, grid.intervals());
  const double w = (t - grid.time(k0)) / grid.step();
  auto lerp = [w](const Mat& a, const Mat& b) { return Mat((1.0 - w) * a + w * b); };
  RiccatiValue v;
  if (sol.mode == Interaction::I1) {
    v.P_d = lerp(sol.P_d[k0], sol.P_d[k1]);
    v.P_tau = lerp(sol.P_tau[k0], sol.P_tau[k1]);
    v.P_a = lerp(sol.P_a[k0], sol.P_a[k1]);
  } else {
    v.P = lerp(sol.P[k0], sol.P[k1]);
  }
  return v;
}

}  // namespace tad
