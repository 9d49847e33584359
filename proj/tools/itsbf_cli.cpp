// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The itsbf Authors
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
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "itsbf/config.hpp"
#include "itsbf/dump.hpp"
#include "itsbf/error.hpp"
#include "itsbf/harness.hpp"
#include "itsbf/results_io.hpp"
#include "itsbf/selfcheck.hpp"

namespace {

itsbf::ExperimentSpec load_spec(const std::string& config_path) {
  return config_path.empty() ? itsbf::default_table1_config() : itsbf::load_experiment_spec(config_path);
}

int run_sweep_command(const std::string& config_path, const std::string& kind, const std::string& constraint,
                      std::optional<int> trials, std::optional<std::uint64_t> seed, std::optional<int> workers,
                      const std::string& out, const std::string& plot, bool timing) {
  itsbf::ExperimentSpec spec = load_spec(config_path);
  if (!kind.empty()) {
    const auto k = itsbf::parse_sweep_kind(kind);
    if (k != spec.sweep) {
      spec.sweep = k;
      spec.grid = itsbf::default_grid(k);
    }
  }
  if (!constraint.empty()) spec.constraint = itsbf::parse_constraint_kind(constraint);
  if (trials) spec.trials = *trials;
  if (seed) spec.base_seed = *seed;
  if (workers) spec.workers = *workers;
  spec.validate();

  const auto records = itsbf::run_sweep(spec);
  itsbf::write_results(records, out, {.include_timing = timing});
  int failed = 0;
  for (const auto& r : records)
    if (!r.summary && !r.ok) ++failed;
  if (failed > 0) std::cerr << failed << " trial(s) failed; see rows marked 'failed'\n";
  if (!plot.empty()) itsbf::write_plot_script(plot, out, spec.sweep);
  for (const auto& r : records) {
    if (!r.summary) continue;
    std::cout << itsbf::to_string(r.sweep) << "=" << r.sweep_value << "  " << itsbf::to_string(r.method) << " ("
              << (r.illumination ? itsbf::to_string(*r.illumination) : "none") << ")  mean WSR " << r.wsr
              << "  [" << r.n_averaged << " ok, " << r.n_failed << " failed]\n";
  }
  return 0;
}

int run_solve_command(const std::string& config_path, std::uint64_t seed, int trial, const std::string& method,
                      const std::string& illumination, const std::string& dump_solution,
                      const std::string& dump_layout, const std::string& dump_channel, const std::string& dump_trace) {
  itsbf::ExperimentSpec spec = load_spec(config_path);
  spec.base_seed = seed;
  const auto m = itsbf::parse_method(method);
  const auto il = illumination.empty() ? spec.illuminations.front() : itsbf::parse_illumination(illumination);
  // A single instance uses the base values, not a sweep point.
  spec.sweep = itsbf::SweepKind::kPowerBudget;
  const double value = spec.p_max_dbm;

  const auto setup = itsbf::prepare_trial(spec, value, trial, il);
  std::vector<itsbf::BcdIteration> log;
  const auto solution = itsbf::solve_trial(spec, setup, m, &log);

  std::cout << "method " << itsbf::to_string(m) << ", illumination " << itsbf::to_string(il) << ", constraint "
            << itsbf::to_string(spec.constraint) << ", P_max " << spec.p_max_dbm << " dBm\n";
  for (Eigen::Index k = 0; k < solution.sinr.size(); ++k)
    std::cout << "  user " << k << ": SINR " << solution.sinr(k) << ", SE " << solution.se(k) << " bit/s/Hz\n";
  std::cout << "WSR " << solution.wsr << " bit/s/Hz after " << solution.iterations << " iteration(s)\n";

  if (!dump_solution.empty()) {
    if (m == itsbf::Method::kNoIts) {
      const auto n = setup.instance.n_antennas();
      const itsbf::SystemInstance direct(itsbf::CMatrix::Identity(n, n), setup.direct_channel,
                                         setup.instance.noise_power(), setup.instance.weights(),
                                         itsbf::ConstraintKind::kTransmittedPower, setup.instance.p_max());
      itsbf::write_solution(direct, solution, dump_solution);
    } else {
      itsbf::write_solution(setup.instance, solution, dump_solution);
    }
  }
  if (!dump_layout.empty()) itsbf::write_layout(setup.layout, dump_layout);
  if (!dump_channel.empty())
    itsbf::write_channel_dump({{trial, setup.seed, setup.drop, setup.instance.channel()}}, dump_channel);
  if (!dump_trace.empty()) itsbf::write_trace(log, dump_trace);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"itsbf: beamforming for antenna arrays with an intelligent transmissive surface"};
  app.require_subcommand(1);

  std::string config_path;
  std::string kind;
  std::string constraint;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out;
  std::string plot;
  bool timing = false;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo parameter sweep, results as CSV");
  sweep->add_option("--kind", kind, "power | distance | loss")->check(CLI::IsMember({"power", "distance", "loss"}));
  sweep->add_option("--constraint", constraint, "rp | tp")->check(CLI::IsMember({"rp", "tp"}));
  sweep->add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  sweep->add_option("--trials", trials, "Monte Carlo trials per sweep value")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "base seed");
  sweep->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out, "output CSV path")->required();
  sweep->add_option("--plot", plot, "write a matplotlib script for the summary rows");
  sweep->add_flag("--timing", timing, "fill the wall_time_ms column (output is then not reproducible)");

  std::string solve_config;
  std::uint64_t solve_seed = 1;
  int solve_trial = 0;
  std::string method = "wmmse_bcd";
  std::string illumination;
  std::string dump_solution;
  std::string dump_layout;
  std::string dump_channel;
  std::string dump_trace;
  auto* solve = app.add_subcommand("solve", "Solve one instance and report per-user SINR");
  solve->add_option("--config", solve_config, "JSON experiment config")->check(CLI::ExistingFile);
  solve->add_option("--seed", solve_seed, "base seed");
  solve->add_option("--trial", solve_trial, "trial index")->check(CLI::NonNegativeNumber);
  solve->add_option("--method", method, "wmmse_bcd | zf_wf | random | no_its");
  solve->add_option("--illumination", illumination, "full | partial | separate");
  solve->add_option("--dump-solution", dump_solution, "write phases, precoder and SINRs as JSON");
  solve->add_option("--dump-layout", dump_layout, "write the array layout as JSON");
  solve->add_option("--dump-channel", dump_channel, "write the user drop and channel as JSON");
  solve->add_option("--dump-trace", dump_trace, "write the per-iteration solver trace as JSON");

  auto* selfcheck = app.add_subcommand("selfcheck", "Run the built-in invariant checks");
  std::uint64_t check_seed = 7;
  selfcheck->add_option("--seed", check_seed, "seed for the random instances");

  auto* print_config = app.add_subcommand("print-config", "Print the default experiment config as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) return run_sweep_command(config_path, kind, constraint, trials, seed, workers, out, plot, timing);
    if (*solve)
      return run_solve_command(solve_config, solve_seed, solve_trial, method, illumination, dump_solution,
                               dump_layout, dump_channel, dump_trace);
    if (*selfcheck) return itsbf::run_selfcheck(std::cout, check_seed) ? 0 : 1;
    if (*print_config) {
      std::cout << itsbf::experiment_spec_to_json(itsbf::default_table1_config());
      return 0;
    }
  } catch (const itsbf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
