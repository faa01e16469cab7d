// tadsim: scenario runs, paired delay comparisons and the regression suite.
#include "tad/config_io.hpp"
#include "tad/regression.hpp"
#include "tad/riccati.hpp"
#include "tad/simulator.hpp"
#include "tad/trajectory_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#ifndef TAD_SCENARIO_DIR
#define TAD_SCENARIO_DIR "scenarios"
#endif

namespace fs = std::filesystem;
using namespace tad;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kNumerical = 2;

int thread_cap() {
  if (const char* env = std::getenv("TADSIM_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw ConfigError(std::string("TADSIM_THREADS: expected an integer, got '") + env + "'");
    }
  }
  return 1;
}

void print_termination(std::ostream& out, const TrajectoryLog& log) {
  const auto& t = log.termination;
  out << t.kind_name();
  if (t.kind == TerminationRecord::Kind::Interception) out << " by d" << t.defender;
  out << " at t=" << t.time << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Target-attacker-defender games with limited visibility"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string profile_name = "limited";
  std::vector<std::string> overrides;
  unsigned long long seed = 0;
  bool strict = false;
  bool diagnostics = false;
  std::string optimizer = "bfgs";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--set", overrides, "Config override key=value (repeatable)");
    sub->add_flag("--strict", strict, "Fail on optimizer iteration limit");
    sub->add_option("--seed", seed, "Seed for randomized checks");
    sub->add_option("--optimizer", optimizer, "Gain optimizer: bfgs | gd")
        ->check(CLI::IsMember({"bfgs", "gd"}));
  };

  auto* run_cmd = app.add_subcommand("run", "Simulate one observation profile");
  add_common(run_cmd);
  run_cmd->add_option("--profile", profile_name, "complete | limited")
      ->check(CLI::IsMember({"complete", "limited"}));
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  run_cmd->add_flag("--diagnostics", diagnostics, "Write per-node optimizer diagnostics");

  std::string player_name;
  double zeta = 0.0;
  auto* paired_cmd = app.add_subcommand("paired", "Compare two runs differing in one radius");
  add_common(paired_cmd);
  paired_cmd->add_option("--player", player_name, "Varied player (d<i> or tau)")->required();
  paired_cmd->add_option("--zeta", zeta, "Alternative visibility radius")->required();
  paired_cmd->add_option("--out", out_dir, "Output directory");

  auto* suicidal_cmd = app.add_subcommand("suicidal-check", "Straight-line check for lambda = 0");
  add_common(suicidal_cmd);
  suicidal_cmd->add_option("--out", out_dir, "Output directory");

  std::string suite = "vi";
  std::string manifest_path;
  auto* regress_cmd = app.add_subcommand("regress", "Run the regression suite");
  regress_cmd->add_option("--suite", suite, "Suite name")->check(CLI::IsMember({"vi"}));
  regress_cmd->add_option("--manifest", manifest_path, "Manifest JSON")
      ->check(CLI::ExistingFile);
  regress_cmd->add_option("--out", out_dir, "Per-scenario artifact directory");
  regress_cmd->add_flag("--strict", strict, "Fail on optimizer iteration limit");
  regress_cmd->add_option("--optimizer", optimizer, "Gain optimizer: bfgs | gd")
      ->check(CLI::IsMember({"bfgs", "gd"}));

  auto* dump_cmd = app.add_subcommand("dump-riccati", "Write the Riccati solution as CSV");
  add_common(dump_cmd);
  dump_cmd->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }
  (void)seed;

  RunOptions options;
  options.optimizer.strict = strict;
  if (optimizer == "gd") options.optimizer.method = OptimizerSettings::Method::GradientDescent;

  try {
    if (*run_cmd) {
      const auto cfg = load_config(config_path, overrides);
      const auto log = run(cfg, parse_profile(profile_name), options);
      write_run_artifacts(out_dir, log, diagnostics);
      print_termination(std::cout, log);
    } else if (*paired_cmd) {
      const auto cfg = load_config(config_path, overrides);
      const auto player = PlayerId::parse(player_name);
      const auto report = run_paired_delay(cfg, player, zeta, options);
      auto show = [](const std::optional<double>& t) {
        return t ? std::to_string(*t) : std::string("never");
      };
      std::cout << "first outgoing edge of " << player.name() << ": " << show(report.first_edge_time)
                << " (base) / " << show(report.second_edge_time) << " (zeta=" << zeta << ")\n"
                << "team controls identical before first edge: "
                << (report.identical_before ? "yes" : "no") << '\n'
                << "first divergence: " << show(report.first_divergence) << '\n';
      if (!out_dir.empty()) {
        write_run_artifacts(fs::path(out_dir) / "base", report.first, false);
        write_run_artifacts(fs::path(out_dir) / "alternative", report.second, false);
      }
    } else if (*suicidal_cmd) {
      const auto cfg = load_config(config_path, overrides);
      const auto report = run_suicidal_check(cfg, options);
      std::cout << "max cross product: complete " << report.max_cross_complete << ", limited "
                << report.max_cross_limited << " (tolerance " << report.cross_tolerance << ")\n"
                << "attacker/target deviation between profiles: state "
                << report.max_state_deviation << ", control " << report.max_control_deviation
                << '\n'
                << "straight line: " << (report.straight_line() ? "yes" : "no") << '\n';
      if (!out_dir.empty()) {
        write_run_artifacts(fs::path(out_dir) / "complete", report.complete, false);
        write_run_artifacts(fs::path(out_dir) / "limited", report.limited, false);
      }
      return report.straight_line() ? kOk : kNumerical;
    } else if (*regress_cmd) {
      const fs::path path =
          manifest_path.empty() ? fs::path(TAD_SCENARIO_DIR) / "manifest.json" : fs::path(manifest_path);
      const auto manifest = RegressionManifest::load(path);
      const auto outcomes = run_regression(manifest, options, thread_cap());
      print_regression_table(std::cout, manifest, outcomes);
      bool all = true;
      for (const auto& o : outcomes) {
        all = all && o.passed();
        if (!out_dir.empty()) write_run_artifacts(fs::path(out_dir) / o.expected.id, o.log, true);
      }
      return all ? kOk : kNumerical;
    } else if (*dump_cmd) {
      const auto cfg = load_config(config_path, overrides);
      const auto sol = solve(build_matrices(cfg), TimeGrid::from_config(cfg));
      fs::create_directories(out_dir);
      std::ofstream out(fs::path(out_dir) / "riccati.csv");
      if (!out) throw std::runtime_error(out_dir + ": cannot open riccati.csv for writing");
      out.precision(17);
      write_riccati_csv(out, sol);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const FiniteEscape& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const IterationLimit& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
