// Copyright 2026 The ESS Authors
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

#include <fstream>
#include <iostream>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "ess/bench/sizing.h"
#include "ess/injector/remote_control.h"
#include "ess/injector/schedule.h"

int main(int argc, char** argv) {
  CLI::App app{"Preemption injector: notices, terminations and respawns"};
  std::string config_path, cluster_path, duration = "7200s", log_path, preset;
  std::optional<uint64_t> seed;
  std::string sample_out;
  size_t sample_n = 0;
  app.add_option("--config", config_path, "preemption model JSON");
  app.add_option("--preset", preset, "named model instead of --config")
      ->check(CLI::IsMember(ess::ModelPresetNames()));
  app.add_option("--cluster", cluster_path,
                 "cluster JSON: namenode, relocator, respawn template");
  app.add_option("--duration", duration, "run length, e.g. 7200s or 2h");
  app.add_option("--seed", seed, "overrides the config seed");
  app.add_option("--log", log_path, "event log, JSON lines (default stdout)");
  app.add_option("--sample", sample_n,
                 "offline mode: print this many lifetimes as an empirical CDF");
  app.add_option("--sample-out", sample_out, "CSV file for --sample");
  CLI11_PARSE(app, argc, argv);

  ess::PreemptionModelParams params;
  if (!config_path.empty()) {
    auto loaded = ess::LoadModelParams(config_path);
    if (!loaded.ok()) {
      std::cerr << loaded.status().ToString() << "\n";
      return 2;
    }
    params = loaded.value();
  } else if (!preset.empty()) {
    params = ess::ModelPreset(preset).value();
  }
  if (seed) params.seed = *seed;

  if (sample_n > 0) {
    std::string csv = ess::CdfToCsv(
        ess::EmpiricalCdf(ess::SampleLifetimes(params, sample_n)));
    if (sample_out.empty()) {
      std::cout << csv;
    } else {
      std::ofstream(sample_out) << csv;
    }
    return 0;
  }

  if (cluster_path.empty()) {
    std::cerr << "--cluster is required unless --sample is given\n";
    return 2;
  }
  auto cluster = ess::LoadClusterConfig(cluster_path);
  auto run_for = ess::ParseSeconds(duration);
  if (!cluster.ok() || !run_for.ok()) {
    std::cerr << (cluster.ok() ? run_for.status() : cluster.status()).ToString()
              << "\n";
    return 2;
  }
  ess::RemoteClusterControl control(cluster.value());
  auto fleet = control.ActiveDatanodes();
  if (!fleet.ok()) {
    std::cerr << "namenode unreachable: " << fleet.status().ToString() << "\n";
    return 1;
  }
  spdlog::info("injecting preemptions into {} datanodes for {}s",
               fleet.value().size(), run_for.value());

  std::ofstream log_file;
  if (!log_path.empty()) log_file.open(log_path);
  std::ostream& log = log_path.empty() ? std::cout : log_file;
  ess::RunSchedule(params, fleet.value(), &control, ess::SystemClock::Get(),
                   ess::FromSeconds(run_for.value()),
                   [&](const ess::PreemptionEvent& e) {
                     log << ess::EventToJson(e) << std::endl;
                   });
  return 0;
}
