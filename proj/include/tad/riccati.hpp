#pragma once

#include "tad/model.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace tad {

/// Uniform grid t_k = k * step, k = 0..intervals.
class TimeGrid {
 public:
  TimeGrid(double step, int intervals);
  static TimeGrid from_config(const ScenarioConfig& cfg);

  double step() const { return step_; }
  int intervals() const { return intervals_; }
  int nodes() const { return intervals_ + 1; }
  double horizon() const { return step_ * intervals_; }
  double time(int k) const { return step_ * k; }

  /// Index of the node at t when t is on the grid (within step/2 * 1e-6).
  std::optional<int> node_at(double t) const;
  /// Index of the last node not after t.
  int floor_node(double t) const;

  bool operator==(const TimeGrid&) const = default;

 private:
  double step_;
  int intervals_;
};

/// The backward solve blew up: no equilibrium exists on the horizon for these
/// parameters.
class FiniteEscape : public std::runtime_error {
 public:
  FiniteEscape(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

inline constexpr double kEscapeThreshold = 1e12;

/// Riccati values at one instant. I1 fills P_d, P_tau, P_a; I2 fills P.
struct RiccatiValue {
  Mat P_d, P_tau, P_a;
  Mat P;
};

struct RiccatiSolution {
  TimeGrid grid{1.0, 2};
  Interaction mode = Interaction::I1;
  // I1
  std::vector<Mat> P_d, P_tau, P_a;
  // I2
  std::vector<Mat> P;

  RiccatiValue node(int k) const;
};

/// Right-hand side dP/dt of the coupled nonzero-sum equations.
std::array<Mat, 3> nzs_rhs(const GameMatrices& m, const Mat& P_d, const Mat& P_tau, const Mat& P_a);
/// Right-hand side dP/dt of the zero-sum equation.
Mat zs_rhs(const GameMatrices& m, const Mat& P);

/// Coupled RDEs of the nonzero-sum game, integrated backward from P_p(T) = F_p
/// with classical RK4 on the grid.
RiccatiSolution solve_nzs(const GameMatrices& m, const TimeGrid& grid);
/// Single RDE of the zero-sum game, backward from P(T) = F.
RiccatiSolution solve_zs(const GameMatrices& m, const TimeGrid& grid);
/// Dispatches on m.interaction.
RiccatiSolution solve(const GameMatrices& m, const TimeGrid& grid);

/// Six scalar functions describing the target/attacker blocks when the
/// attacker is suicidal: P_tau^{22} = [k1 k2; k2 k3], P_a^{22} = [k4 k5; k5 k6].
struct SuicidalReducedSolution {
  TimeGrid grid{1.0, 2};
  std::vector<std::array<double, 6>> k;

  double k1(int node) const { return k[node][0]; }
  double k4(int node) const { return k[node][3]; }
};

std::array<double, 6> suicidal_rhs(const ScenarioConfig& cfg, const std::array<double, 6>& k);
SuicidalReducedSolution solve_suicidal_reduced(const ScenarioConfig& cfg, const TimeGrid& grid);

/// Node value on-grid, linear interpolation otherwise. Throws
/// std::out_of_range for t outside [0, T].
RiccatiValue value_at(const RiccatiSolution& sol, double t);

}  // namespace tad
