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
#include <mutex>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "ess/relocator/relocator.h"
#include "signals.h"

int main(int argc, char** argv) {
  sigset_t signals = ess::BlockShutdownSignals();
  CLI::App app{"Moves blocks off datanodes that received a preemption notice"};
  std::string listen = "127.0.0.1:9100";
  std::string report_file;
  ess::RelocatorOptions options;
  app.add_option("--listen", listen, "host:port for preemption notices");
  app.add_option("--namenode", options.namenode_address, "namenode host:port")
      ->required();
  app.add_option("--parallelism", options.parallelism,
                 "concurrent block transfers per drain")
      ->check(CLI::PositiveNumber);
  app.add_option("--report-file", report_file,
                 "append one JSON line per finished drain");
  CLI11_PARSE(app, argc, argv);

  auto addr = ess::ParseHostPort(listen);
  if (!addr.ok()) {
    std::cerr << addr.status().ToString() << "\n";
    return 2;
  }
  std::ofstream report;
  if (!report_file.empty()) {
    report.open(report_file, std::ios::app);
    if (!report) {
      std::cerr << "cannot open " << report_file << "\n";
      return 2;
    }
  }
  std::mutex out_mu;
  ess::Relocator relocator(options);
  relocator.SetReportCallback([&](const ess::RelocationReport& r) {
    std::string line = ess::ReportToJson(r);
    std::lock_guard<std::mutex> lock(out_mu);
    std::cout << line << std::endl;
    if (report.is_open()) report << line << std::endl;
  });
  auto bound = relocator.Start(addr.value());
  if (!bound.ok()) {
    std::cerr << bound.status().ToString() << "\n";
    return 1;
  }
  spdlog::info("relocator listening on {}", bound.value().ToString());
  ess::WaitForShutdownSignal(signals);
  relocator.Stop();
  return 0;
}
