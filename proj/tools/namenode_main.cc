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

#include <iostream>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "ess/namenode/namenode_service.h"
#include "signals.h"

int main(int argc, char** argv) {
  sigset_t signals = ess::BlockShutdownSignals();
  CLI::App app{"Metadata service of the ephemeral block store"};
  std::string listen = "127.0.0.1:9000";
  std::string config_path;
  app.add_option("--listen", listen, "host:port to serve on");
  app.add_option("--config", config_path,
                 "JSON with block_size_bytes, heartbeat_timeout_ms, placement_policy");
  CLI11_PARSE(app, argc, argv);

  ess::NamenodeConfig config;
  if (!config_path.empty()) {
    auto loaded = ess::LoadNamenodeConfig(config_path);
    if (!loaded.ok()) {
      std::cerr << loaded.status().ToString() << "\n";
      return 2;
    }
    config = loaded.value();
  }
  auto addr = ess::ParseHostPort(listen);
  if (!addr.ok()) {
    std::cerr << addr.status().ToString() << "\n";
    return 2;
  }
  ess::NamenodeService service(config);
  auto bound = service.Start(addr.value());
  if (!bound.ok()) {
    std::cerr << bound.status().ToString() << "\n";
    return 1;
  }
  spdlog::info("namenode listening on {} (block size {} bytes)",
               bound.value().ToString(), config.block_size);
  ess::WaitForShutdownSignal(signals);
  service.Stop();
  return 0;
}
