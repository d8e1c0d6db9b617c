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

#ifndef ESS_CLUSTER_LOCAL_CLUSTER_H_
#define ESS_CLUSTER_LOCAL_CLUSTER_H_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ess/datanode/datanode.h"
#include "ess/injector/schedule.h"
#include "ess/namenode/namenode_service.h"
#include "ess/relocator/relocator.h"

namespace ess {

struct LocalClusterOptions {
  NamenodeConfig namenode;
  size_t datanodes = 4;
  // Template for every datanode; namenode_address is filled in.
  DatanodeOptions datanode;
  bool with_relocator = true;
  RelocatorOptions relocator;
  std::string host = "127.0.0.1";
};

// A namenode, datanodes and a relocator in one process, each on its own
// loopback port and talking the wire protocol.
class LocalCluster : public ClusterControl {
 public:
  static Result<std::unique_ptr<LocalCluster>> Start(LocalClusterOptions options);
  ~LocalCluster() override;

  const std::string& namenode_address() const { return namenode_address_; }
  std::string relocator_address() const { return relocator_address_; }
  Namenode& namenode() { return namenode_->namenode(); }
  Relocator* relocator() { return relocator_.get(); }

  Result<DatanodeId> AddDatanode(std::optional<DatanodeOptions> options = {});
  Datanode* datanode(DatanodeId id);
  // Datanodes not yet terminated, in id order.
  std::vector<DatanodeId> live_datanodes();

  Status Notice(uint32_t slot, DatanodeId node, TimePoint deadline) override;
  Status Terminate(uint32_t slot, DatanodeId node) override;
  Result<DatanodeId> Respawn(uint32_t slot) override;

  // Convenience forms without a slot.
  Status Notice(DatanodeId node, TimePoint deadline) {
    return Notice(0, node, deadline);
  }
  Status Terminate(DatanodeId node) { return Terminate(0, node); }

 private:
  explicit LocalCluster(LocalClusterOptions options);

  const LocalClusterOptions options_;
  std::unique_ptr<NamenodeService> namenode_;
  std::unique_ptr<Relocator> relocator_;
  std::string namenode_address_;
  std::string relocator_address_;

  std::mutex mu_;
  std::map<DatanodeId, std::unique_ptr<Datanode>> datanodes_;
};

}  // namespace ess

#endif  // ESS_CLUSTER_LOCAL_CLUSTER_H_
