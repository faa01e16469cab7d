#pragma once

#include "tad/riccati.hpp"
#include "tad/trajectory.hpp"

namespace tad {

enum class CostKind { Standard, Adapted };

/// I1 fills defenders/target/attacker; I2 fills zero_sum.
struct PlayerCosts {
  double defenders = 0.0;
  double target = 0.0;
  double attacker = 0.0;
  double zero_sum = 0.0;
};

/// Objective values of a logged trajectory covering the whole grid [0, T].
///
/// Running costs use the trapezoidal rule per interval: the control, gain and
/// information matrix of node k are held over [t_k, t_{k+1}) and the state and
/// Riccati values are taken at both ends. `Adapted` evaluates the parametric
/// indices J^Ad and needs gains and snapshots at every node but the last.
/// Throws std::invalid_argument when the log does not match the grid.
PlayerCosts objective_eval(const TrajectoryLog& log, const GameMatrices& m,
                           const RiccatiSolution& sol, CostKind which);

}  // namespace tad
