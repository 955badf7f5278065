// Copyright 2026 The slicesim authors
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

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "slicesim/simulation.hpp"

namespace {

void print_report(const slicesim::RunReport& r) {
  std::printf("scenario:  %s\n", r.name.c_str());
  std::printf("slots:     %llu\n", static_cast<unsigned long long>(r.slots));
  std::printf("controls:  %d\n", r.control_messages);
  std::printf("tb_bytes:  %llu\n",
              static_cast<unsigned long long>(r.total_tb_bytes));
  std::printf("delivered: %llu\n",
              static_cast<unsigned long long>(r.total_delivered_bytes));
  std::printf("violations: conservation=%llu cap=%llu guarantee=%llu\n",
              static_cast<unsigned long long>(r.conservation_violations),
              static_cast<unsigned long long>(r.cap_violations),
              static_cast<unsigned long long>(r.guarantee_violations));
  std::printf("artifacts: %s\n", r.prbs_csv.c_str());
  std::printf("           %s\n", r.throughput_csv.c_str());
  std::printf("           %s\n", r.control_log_csv.c_str());
  std::printf("           %s\n", r.report_json.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sliced gNB MAC scheduler with a closed-loop RIC"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, builtin_name;
  std::uint64_t seed = 0;
  bool have_seed = false, tcp = false;
  unsigned prbs_override = 0;

  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("--scenario", scenario_path, "Scenario JSON path")
      ->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  auto* seed_opt = run->add_option("--seed", seed, "RNG seed override");
  run->add_flag("--tcp", tcp, "Run the RIC as a separate process over TCP");

  auto* builtin = app.add_subcommand("builtin", "Run a built-in scenario");
  builtin->add_option("name", builtin_name, "Scenario name")->required();
  builtin->add_option("--out", out_dir, "Output directory")->required();
  auto* bseed_opt = builtin->add_option("--seed", seed, "RNG seed override");
  builtin->add_flag("--tcp", tcp,
                    "Run the RIC as a separate process over TCP");
  builtin->add_option("--prbs", prbs_override,
                      "Cell PRB count override (exp1 only)");

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("--scenario", scenario_path, "Scenario JSON path")
      ->required();

  auto* verify = app.add_subcommand("verify", "Re-check a run's artifacts");
  verify->add_option("--out", out_dir, "Run output directory")->required();

  CLI11_PARSE(app, argc, argv);
  have_seed = seed_opt->count() > 0 || bseed_opt->count() > 0;

  try {
    if (app.got_subcommand(run)) {
      slicesim::Scenario sc = slicesim::load_scenario(scenario_path);
      slicesim::RunOptions opts;
      if (have_seed) opts.seed = seed;
      opts.tcp = tcp;
      print_report(slicesim::run_scenario(sc, out_dir, opts));
      return 0;
    }
    if (app.got_subcommand(builtin)) {
      slicesim::Scenario sc;
      if (prbs_override != 0 &&
          (builtin_name == "exp1" || builtin_name == "two-slice-closed-loop"))
        sc = slicesim::builtin_exp1(prbs_override);
      else
        sc = slicesim::builtin_scenario(builtin_name);
      slicesim::RunOptions opts;
      if (have_seed) opts.seed = seed;
      opts.tcp = tcp;
      print_report(slicesim::run_scenario(sc, out_dir, opts));
      return 0;
    }
    if (app.got_subcommand(validate)) {
      slicesim::load_scenario(scenario_path);
      std::printf("ok: %s\n", scenario_path.c_str());
      return 0;
    }
    if (app.got_subcommand(verify)) {
      auto failures = slicesim::verify_run(out_dir);
      if (failures.empty()) {
        std::printf("ok: %s\n", out_dir.c_str());
        return 0;
      }
      for (const auto& f : failures) std::fprintf(stderr, "fail: %s\n", f.c_str());
      return 1;
    }
  } catch (const slicesim::SimError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
