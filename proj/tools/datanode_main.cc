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
#include "ess/bench/sizing.h"
#include "ess/datanode/datanode.h"
#include "signals.h"

namespace {

std::optional<double> ParseRate(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto bytes = ess::ParseBytes(text);
  if (!bytes.ok()) {
    std::cerr << bytes.status().ToString() << "\n";
    std::exit(2);
  }
  return bytes.value();
}

}  // namespace

int main(int argc, char** argv) {
  sigset_t signals = ess::BlockShutdownSignals();
  CLI::App app{"Block storage node of the ephemeral block store"};
  std::string listen = "127.0.0.1:0";
  ess::DatanodeOptions options;
  std::string egress, ingress;
  double heartbeat_ms = 1000;
  app.add_option("--listen", listen, "host:port to serve on");
  app.add_option("--namenode", options.namenode_address, "namenode host:port")
      ->required();
  app.add_option("--capacity-blocks", options.capacity_blocks,
                 "number of blocks this node can hold");
  app.add_option("--egress-limit", egress,
                 "read payload bytes per second, e.g. 50MB (default unlimited)");
  app.add_option("--ingress-limit", ingress,
                 "write payload bytes per second (default unlimited)");
  app.add_option("--control-peer", options.control_peers,
                 "non-loopback host allowed to send drain/terminate");
  app.add_option("--heartbeat-ms", heartbeat_ms, "heartbeat interval");
  CLI11_PARSE(app, argc, argv);

  options.egress_bytes_per_sec = ParseRate(egress);
  options.ingress_bytes_per_sec = ParseRate(ingress);
  options.heartbeat_interval = ess::FromSeconds(heartbeat_ms / 1000);
  auto addr = ess::ParseHostPort(listen);
  if (!addr.ok()) {
    std::cerr << addr.status().ToString() << "\n";
    return 2;
  }
  ess::Datanode node(options);
  auto bound = node.Start(addr.value());
  if (!bound.ok()) {
    std::cerr << bound.status().ToString() << "\n";
    return 1;
  }
  // Exits on a signal or once a Terminate message arrives.
  std::thread watcher([&] {
    ess::WaitForShutdownSignal(signals);
    node.Terminate();
  });
  while (node.state() != ess::NodeState::kTerminated) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  spdlog::info("datanode {} exiting", node.id().value);
  watcher.detach();
  return 0;
}
