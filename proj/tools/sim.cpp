// Copyright 2026 The dualarm-ibvs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: run, sweep, check, scenario.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "dualarm/defaults.hpp"
#include "dualarm/scenario_io.hpp"
#include "dualarm/simulator.hpp"
#include "dualarm/verification.hpp"

namespace fs = std::filesystem;
using dualarm::Scenario;
using dualarm::ScenarioError;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kSimulationFailure = 2;
constexpr int kVerificationFailure = 3;

// Runs one scenario into `out` and returns the summary.
dualarm::Summary run_into(const Scenario& sc, const fs::path& out) {
  fs::create_directories(out);
  const dualarm::TrajectoryLog log = dualarm::run(sc);
  {
    std::ofstream csv(out / "trajectory.csv");
    dualarm::write_trajectory_csv(log, csv);
  }
  dualarm::Summary summary;
  if (log.rows.empty()) {
    summary.failure_reason = log.failure_reason;
  } else {
    summary = dualarm::metrics_summary(log);
  }
  std::ofstream(out / "summary.json")
      << dualarm::summary_to_json(summary).dump(2) << '\n';
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : log.events) {
    events.push_back({{"t", e.t}, {"kind", e.kind}, {"detail", e.detail}});
  }
  std::ofstream(out / "events.json") << events.dump(2) << '\n';
  return summary;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-arm visual servoing simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir;
  std::vector<std::string> overrides;

  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario");
  run_cmd->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  run_cmd->add_option("--set", overrides, "Override key=value (dotted key)");

  std::string ws_text;
  double wd = 1.0;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep w_s with w_t = 1 - w_s");
  sweep_cmd->add_option("--scenario", scenario_path, "Scenario JSON")
      ->required();
  sweep_cmd->add_option("--ws", ws_text, "Comma-separated w_s values")
      ->required();
  sweep_cmd->add_option("--wd", wd, "w_d for every run")->required();
  sweep_cmd->add_option("--out", out_dir, "Output directory")->required();
  sweep_cmd->add_option("--set", overrides, "Override key=value (dotted key)");
  sweep_cmd->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);

  dualarm::CheckOptions check_opts;
  auto* check_cmd = app.add_subcommand("check", "Run self-verification");
  check_cmd->add_option("--seed", check_opts.seed, "RNG seed");
  check_cmd->add_option("--trials", check_opts.trials, "Random states")
      ->check(CLI::PositiveNumber);
  check_cmd->add_flag("--corrupt-interaction-sign",
                      check_opts.corrupt_interaction_sign)
      ->group("");

  int path = 1;
  std::string scenario_out;
  auto* scen_cmd =
      app.add_subcommand("scenario", "Write a shipped default scenario");
  scen_cmd->add_option("--path", path, "Waypoint path 1-3, 0 for hold")
      ->check(CLI::Range(0, 3));
  scen_cmd->add_option("--out", scenario_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run_cmd) {
      const Scenario sc = dualarm::load_scenario(scenario_path, overrides);
      const dualarm::Summary s = run_into(sc, out_dir);
      if (!s.success) {
        std::cerr << "simulation failed: " << s.failure_reason << '\n';
        return kSimulationFailure;
      }
      return kOk;
    }

    if (*sweep_cmd) {
      std::vector<double> ws;
      try {
        ws = parse_list(ws_text);
      } catch (const std::exception&) {
        throw ScenarioError("ws", "expected a comma-separated list of numbers");
      }
      std::vector<Scenario> scenarios;
      for (double w : ws) {
        if (!(w >= 0.0 && w <= 1.0)) {
          throw ScenarioError("ws", "values must lie in [0, 1]");
        }
        std::vector<std::string> o = overrides;
        o.push_back("gains.w_s=" + dualarm::format_double(w));
        o.push_back("gains.w_t=" + dualarm::format_double(1.0 - w));
        o.push_back("gains.w_d=" + dualarm::format_double(wd));
        scenarios.push_back(dualarm::load_scenario(scenario_path, o));
      }
      std::vector<dualarm::Summary> results(ws.size());
      std::vector<std::string> errors(ws.size());
      std::atomic<size_t> next{0};
      auto worker = [&] {
        for (size_t i; (i = next++) < ws.size();) {
          try {
            results[i] = run_into(scenarios[i],
                                  fs::path(out_dir) /
                                      ("ws_" + dualarm::format_double(ws[i])));
          } catch (const std::exception& e) {
            errors[i] = e.what();
          }
        }
      };
      std::vector<std::thread> pool;
      const size_t n = std::min<size_t>(jobs, ws.size());
      for (size_t i = 0; i < n; ++i) pool.emplace_back(worker);
      for (auto& t : pool) t.join();

      std::ofstream table(fs::path(out_dir) / "sweep.csv");
      table << "w_s,w_t,w_d,success,duration_s,max_fe_norm,mean_fe_norm,"
               "max_corner_radius_px,max_relpose_trans_m,max_relpose_rot_rad,"
               "failure_reason\n";
      bool all_ok = true;
      for (size_t i = 0; i < ws.size(); ++i) {
        const dualarm::Summary& s = results[i];
        double radius = 0.0;
        for (double r : s.corner_radius_px) radius = std::max(radius, r);
        const std::string reason =
            errors[i].empty() ? s.failure_reason : errors[i];
        all_ok = all_ok && s.success && errors[i].empty();
        using dualarm::format_double;
        table << format_double(ws[i]) << ',' << format_double(1.0 - ws[i])
              << ',' << format_double(wd) << ',' << (s.success ? 1 : 0) << ','
              << format_double(s.duration_s) << ','
              << format_double(s.max_fe_norm) << ','
              << format_double(s.mean_fe_norm) << ',' << format_double(radius)
              << ',' << format_double(s.max_relpose_trans_m) << ','
              << format_double(s.max_relpose_rot_rad) << ",\"" << reason
              << "\"\n";
      }
      return all_ok ? kOk : kSimulationFailure;
    }

    if (*check_cmd) {
      bool ok = true;
      for (const auto& r : dualarm::run_checks(check_opts)) {
        std::printf("%-24s %-4s max_err=%.3e tol=%.1e\n", r.name.c_str(),
                    r.passed ? "ok" : "FAIL", r.max_error, r.tolerance);
        if (!r.passed) {
          std::fprintf(stderr, "check failed: %s\n", r.name.c_str());
          ok = false;
        }
      }
      return ok ? kOk : kVerificationFailure;
    }

    if (*scen_cmd) {
      const std::string text =
          dualarm::scenario_to_json(dualarm::default_scenario(path)).dump(2);
      if (scenario_out.empty()) {
        std::cout << text << '\n';
      } else {
        std::ofstream(scenario_out) << text << '\n';
      }
      return kOk;
    }
  } catch (const ScenarioError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSimulationFailure;
  }
  return kOk;
}
