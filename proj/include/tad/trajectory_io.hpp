#pragma once

#include "tad/riccati.hpp"
#include "tad/trajectory.hpp"

#include <json.hpp>

#include <filesystem>
#include <ostream>

namespace tad {

/// One row per node: t, x/y per player (d1..dn, tau, a), u per player, and a
/// termination flag set on the terminating node.
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log);

/// Sidecar document: effective config, profile, strategy labels, transition
/// events, termination record and per-node gain diagnostics.
nlohmann::json trajectory_sidecar(const TrajectoryLog& log);

/// t, theta, iterations, fast_path, converged for every limited-profile node.
void write_diagnostics_csv(std::ostream& out, const TrajectoryLog& log);

/// t followed by the row-major entries of every stored matrix.
void write_riccati_csv(std::ostream& out, const RiccatiSolution& sol);

/// Writes trajectory.csv and events.json (plus diagnostics.csv when asked)
/// into dir, creating it if needed. Throws std::runtime_error when the
/// directory is not writable.
void write_run_artifacts(const std::filesystem::path& dir, const TrajectoryLog& log,
                         bool with_diagnostics);

}  // namespace tad
