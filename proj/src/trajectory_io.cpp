#include "tad/trajectory_io.hpp"

#include "tad/config_io.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace tad {

using nlohmann::json;

namespace {

std::vector<PlayerId> players(int n) {
  std::vector<PlayerId> out;
  for (int i = 1; i <= n; ++i) out.push_back(PlayerId::defender(i));
  out.push_back(PlayerId::target());
  out.push_back(PlayerId::attacker());
  return out;
}

Vec2 control_of(const NodeRecord& rec, PlayerId p) {
  if (p.is_defender()) return rec.u_d.segment<2>(2 * (p.index - 1));
  if (p.is_target()) return rec.u_tau;
  return rec.u_a;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << std::setprecision(17);
  return out;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log) {
  const auto ids = players(log.config.n());
  out << "t";
  for (const auto& p : ids) out << ",x_" << p.name() << ",y_" << p.name();
  for (const auto& p : ids) out << ",ux_" << p.name() << ",uy_" << p.name();
  out << ",terminated\n";
  for (std::size_t k = 0; k < log.nodes.size(); ++k) {
    const auto& rec = log.nodes[k];
    out << rec.t;
    for (const auto& p : ids) {
      const Vec2 x = rec.positions.of(p);
      out << ',' << x.x() << ',' << x.y();
    }
    for (const auto& p : ids) {
      const Vec2 u = control_of(rec, p);
      out << ',' << u.x() << ',' << u.y();
    }
    const bool flag = log.termination.kind != TerminationRecord::Kind::HorizonExpired &&
                      static_cast<int>(k) == log.termination.node;
    out << ',' << (flag ? 1 : 0) << '\n';
  }
}

json trajectory_sidecar(const TrajectoryLog& log) {
  json doc;
  doc["config"] = config_to_json(log.config);
  doc["profile"] = to_string(log.profile);
  doc["strategies"] = {{"defenders", log.defender_strategy},
                       {"target", log.target_strategy},
                       {"attacker", log.attacker_strategy}};
  const auto& term = log.termination;
  json t{{"kind", term.kind_name()}, {"time", term.time}, {"node", term.node},
         {"distance", term.distance}};
  if (term.kind == TerminationRecord::Kind::Interception) {
    t["defender"] = PlayerId::defender(term.defender).name();
  }
  doc["termination"] = t;

  json events = json::array();
  for (const auto& e : log.events) {
    events.push_back({{"t", e.t},
                      {"from", e.edge.from.name()},
                      {"to", e.edge.to.name()},
                      {"change", e.formed ? "formed" : "broken"}});
  }
  doc["events"] = events;

  json diag = json::array();
  for (const auto& rec : log.nodes) {
    if (!rec.diagnostics) continue;
    diag.push_back({{"t", rec.t},
                    {"theta", rec.diagnostics->theta},
                    {"iterations", rec.diagnostics->iterations},
                    {"fast_path", rec.diagnostics->fast_path},
                    {"converged", rec.diagnostics->converged}});
  }
  doc["diagnostics"] = diag;
  return doc;
}

void write_diagnostics_csv(std::ostream& out, const TrajectoryLog& log) {
  out << "t,theta,iterations,fast_path,converged\n";
  for (const auto& rec : log.nodes) {
    if (!rec.diagnostics) continue;
    const auto& d = *rec.diagnostics;
    out << rec.t << ',' << d.theta << ',' << d.iterations << ',' << (d.fast_path ? 1 : 0) << ','
        << (d.converged ? 1 : 0) << '\n';
  }
}

void write_riccati_csv(std::ostream& out, const RiccatiSolution& sol) {
  std::vector<std::pair<std::string, const std::vector<Mat>*>> series;
  if (sol.mode == Interaction::I1) {
    series = {{"Pd", &sol.P_d}, {"Ptau", &sol.P_tau}, {"Pa", &sol.P_a}};
  } else {
    series = {{"P", &sol.P}};
  }
  const Eigen::Index dim = series.front().second->front().rows();
  out << "t";
  for (const auto& [name, _] : series) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) out << ',' << name << '_' << i << '_' << j;
    }
  }
  out << '\n';
  for (int k = 0; k < sol.grid.nodes(); ++k) {
    out << sol.grid.time(k);
    for (const auto& [_, mats] : series) {
      const Mat& m = (*mats)[k];
      for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) out << ',' << m(i, j);
      }
    }
    out << '\n';
  }
}

void write_run_artifacts(const std::filesystem::path& dir, const TrajectoryLog& log,
                         bool with_diagnostics) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error(dir.string() + ": cannot create output directory (" + ec.message() + ")");
  {
    auto out = open_for_write(dir / "trajectory.csv");
    write_trajectory_csv(out, log);
  }
  {
    auto out = open_for_write(dir / "events.json");
    out << trajectory_sidecar(log).dump(2) << '\n';
  }
  if (with_diagnostics) {
    auto out = open_for_write(dir / "diagnostics.csv");
    write_diagnostics_csv(out, log);
  }
}

}  // namespace tad
