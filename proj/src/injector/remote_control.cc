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

#include "ess/injector/remote_control.h"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ess {

Result<RemoteClusterOptions> ParseClusterConfig(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    RemoteClusterOptions o;
    o.namenode_address = j.at("namenode").get<std::string>();
    o.relocator_address = j.value("relocator", std::string());
    if (j.contains("respawn")) {
      const auto& r = j.at("respawn");
      o.respawn.capacity_blocks =
          r.value("capacity_blocks", o.respawn.capacity_blocks);
      if (r.contains("egress_limit")) {
        o.respawn.egress_bytes_per_sec = r.at("egress_limit").get<double>();
      }
      if (r.contains("ingress_limit")) {
        o.respawn.ingress_bytes_per_sec = r.at("ingress_limit").get<double>();
      }
      o.respawn_host = r.value("host", o.respawn_host);
    }
    o.respawn.namenode_address = o.namenode_address;
    return o;
  } catch (const nlohmann::json::exception& e) {
    return InvalidArgument(std::string("cluster config: ") + e.what());
  }
}

Result<RemoteClusterOptions> LoadClusterConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) return NotFound("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseClusterConfig(ss.str());
}

RemoteClusterControl::RemoteClusterControl(RemoteClusterOptions options)
    : options_(std::move(options)),
      rpc_(std::make_shared<RpcClient>()),
      namenode_(rpc_, options_.namenode_address),
      datanodes_(rpc_),
      relocator_(rpc_, options_.relocator_address) {}

RemoteClusterControl::~RemoteClusterControl() = default;

Result<std::string> RemoteClusterControl::AddressOf(DatanodeId node) {
  ESS_ASSIGN_OR_RETURN(ClusterStatusResponse status, namenode_.ClusterStatus());
  for (const auto& info : status.nodes) {
    if (info.id == node) return info.address;
  }
  return NotFound("datanode " + std::to_string(node.value) + " is not registered");
}

Result<std::vector<DatanodeId>> RemoteClusterControl::ActiveDatanodes() {
  ESS_ASSIGN_OR_RETURN(ClusterStatusResponse status, namenode_.ClusterStatus());
  std::vector<DatanodeId> out;
  for (const auto& info : status.nodes) {
    if (info.state == NodeState::kActive) out.push_back(info.id);
  }
  return out;
}

Status RemoteClusterControl::Notice(uint32_t slot, DatanodeId node,
                                    TimePoint deadline) {
  Status result;
  if (auto address = AddressOf(node); address.ok()) {
    Status s = datanodes_.EnterDraining(address.value(), deadline);
    if (!s.ok() && s.code() != StatusCode::kConflict) result = s;
  } else {
    result = address.status();
  }
  if (!options_.relocator_address.empty()) {
    Status s = relocator_.Notify(node, deadline);
    if (!s.ok() && s.code() != StatusCode::kConflict && result.ok()) result = s;
  }
  return result;
}

Status RemoteClusterControl::Terminate(uint32_t slot, DatanodeId node) {
  Status result;
  if (auto address = AddressOf(node); address.ok()) {
    result = datanodes_.Terminate(address.value());
  } else {
    result = address.status();
  }
  auto marked = namenode_.MarkNodeTerminated(node);
  if (!marked.ok() && marked.status().code() != StatusCode::kConflict &&
      result.ok()) {
    result = marked.status();
  }
  return result;
}

Result<DatanodeId> RemoteClusterControl::Respawn(uint32_t slot) {
  auto node = std::make_unique<Datanode>(options_.respawn);
  ESS_RETURN_IF_ERROR(node->Start({options_.respawn_host, 0}).status());
  DatanodeId id = node->id();
  std::lock_guard<std::mutex> lock(mu_);
  spawned_.push_back(std::move(node));
  return id;
}

}  // namespace ess
