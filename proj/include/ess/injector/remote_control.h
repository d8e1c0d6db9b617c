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

#ifndef ESS_INJECTOR_REMOTE_CONTROL_H_
#define ESS_INJECTOR_REMOTE_CONTROL_H_

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "ess/datanode/datanode.h"
#include "ess/injector/schedule.h"
#include "ess/protocol/stubs.h"

namespace ess {

struct RemoteClusterOptions {
  std::string namenode_address;
  std::string relocator_address;
  // Replacement datanodes run inside this process, built from this template.
  DatanodeOptions respawn;
  std::string respawn_host = "127.0.0.1";
};

Result<RemoteClusterOptions> ParseClusterConfig(std::string_view json);
Result<RemoteClusterOptions> LoadClusterConfig(const std::string& path);

// Drives a cluster of separate processes over the wire protocol.
class RemoteClusterControl : public ClusterControl {
 public:
  explicit RemoteClusterControl(RemoteClusterOptions options);
  ~RemoteClusterControl() override;

  Status Notice(uint32_t slot, DatanodeId node, TimePoint deadline) override;
  Status Terminate(uint32_t slot, DatanodeId node) override;
  Result<DatanodeId> Respawn(uint32_t slot) override;

  // Live datanodes in registration order.
  Result<std::vector<DatanodeId>> ActiveDatanodes();

 private:
  Result<std::string> AddressOf(DatanodeId node);

  const RemoteClusterOptions options_;
  std::shared_ptr<RpcClient> rpc_;
  NamenodeStub namenode_;
  DatanodeStub datanodes_;
  RelocatorStub relocator_;

  std::mutex mu_;
  std::vector<std::unique_ptr<Datanode>> spawned_;
};

}  // namespace ess

#endif  // ESS_INJECTOR_REMOTE_CONTROL_H_
