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

#ifndef ESS_PROTOCOL_STUBS_H_
#define ESS_PROTOCOL_STUBS_H_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ess/protocol/messages.h"
#include "ess/protocol/rpc.h"

namespace ess {

// Typed calls against a namenode.
class NamenodeStub {
 public:
  NamenodeStub(std::shared_ptr<RpcClient> rpc, std::string address)
      : rpc_(std::move(rpc)), address_(std::move(address)) {}

  const std::string& address() const { return address_; }

  Result<RegisterResponse> Register(const std::string& datanode_address,
                                    uint64_t capacity_blocks);
  Status Heartbeat(DatanodeId node);
  Result<ObjectMetadata> CreateObject(const std::string& name, uint64_t size);
  Result<ObjectMetadata> SealObject(const std::string& name);
  Result<ObjectMetadata> GetMetadata(const std::string& name);
  Result<BlockDescriptor> AllocateBlock(const std::string& name,
                                        uint32_t index,
                                        std::vector<DatanodeId> exclude);
  Result<BlockDescriptor> ReserveRelocationTarget(
      const std::string& name, BlockId block, std::vector<DatanodeId> exclude);
  Result<uint64_t> CommitRelocation(BlockId block, DatanodeId new_node,
                                    uint64_t expected_version);
  Result<std::vector<NodeBlock>> ListBlocksOnNode(DatanodeId node);
  Status BeginDrain(DatanodeId node, TimePoint deadline);
  Result<uint64_t> MarkNodeTerminated(DatanodeId node);
  Status DeleteObject(const std::string& name, uint64_t expected_version = 0);
  Result<ClusterStatusResponse> ClusterStatus();

 private:
  std::shared_ptr<RpcClient> rpc_;
  std::string address_;
};

// Typed calls against any datanode; the address is per call.
class DatanodeStub {
 public:
  explicit DatanodeStub(std::shared_ptr<RpcClient> rpc) : rpc_(std::move(rpc)) {}

  Status WriteBlock(const std::string& address, BlockId block, uint64_t offset,
                    std::vector<uint8_t> data, uint32_t crc,
                    Deadline deadline = std::nullopt);
  Result<ReadBlockResponse> ReadBlock(const std::string& address, BlockId block,
                                      uint64_t offset, uint64_t length,
                                      Deadline deadline = std::nullopt);
  Status DeleteBlock(const std::string& address, BlockId block,
                     Deadline deadline = std::nullopt);
  Status EnterDraining(const std::string& address, TimePoint deadline);
  // The datanode closes the connection instead of replying; that counts as
  // success, as does an already-unreachable node.
  Status Terminate(const std::string& address);

 private:
  std::shared_ptr<RpcClient> rpc_;
};

class RelocatorStub {
 public:
  RelocatorStub(std::shared_ptr<RpcClient> rpc, std::string address)
      : rpc_(std::move(rpc)), address_(std::move(address)) {}

  Status Notify(DatanodeId node, TimePoint deadline);

 private:
  std::shared_ptr<RpcClient> rpc_;
  std::string address_;
};

}  // namespace ess

#endif  // ESS_PROTOCOL_STUBS_H_
