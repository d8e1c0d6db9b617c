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

#ifndef ESS_NAMENODE_NAMENODE_H_
#define ESS_NAMENODE_NAMENODE_H_

#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ess/common/clock.h"
#include "ess/common/status.h"
#include "ess/protocol/types.h"

namespace ess {

struct NamenodeConfig {
  uint64_t block_size = kDefaultBlockSize;
  Duration heartbeat_timeout = std::chrono::seconds(5);
  // Only "round_robin" is implemented.
  std::string placement_policy = "round_robin";
};

Result<NamenodeConfig> ParseNamenodeConfig(std::string_view json);
Result<NamenodeConfig> LoadNamenodeConfig(const std::string& path);

// A block copy the namenode no longer references and wants removed from a
// datanode. Issued by the caller after the metadata update, best-effort.
struct BlockDeletion {
  std::string address;
  BlockId block;
};

struct NamenodeCounters {
  uint64_t blocks_allocated = 0;
  uint64_t blocks_deleted = 0;
  uint64_t blocks_lost = 0;  // currently Lost, not yet deleted
};

// In-memory metadata service. Every public method runs under one mutex and is
// therefore linearizable; none performs I/O.
class Namenode {
 public:
  explicit Namenode(NamenodeConfig config,
                    Clock* clock = SystemClock::Get());

  uint64_t block_size() const { return config_.block_size; }
  const NamenodeConfig& config() const { return config_; }

  Result<DatanodeId> RegisterDatanode(std::string_view address,
                                      uint64_t capacity_blocks);
  Status Heartbeat(DatanodeId node);

  // Terminates every live node whose last heartbeat is older than the
  // timeout. Returns (node, lost block count) per terminated node.
  std::vector<std::pair<DatanodeId, uint64_t>> ReapExpired();

  // Creates an unsealed object with all of its blocks placed.
  Result<ObjectMetadata> CreateObject(std::string_view name, uint64_t size);
  Result<ObjectMetadata> SealObject(std::string_view name);
  Result<ObjectMetadata> GetMetadata(std::string_view name) const;

  // Replaces block `index` of an unsealed object with a fresh BlockId placed
  // outside `exclude`. The replaced copy, if any, is appended to `deletions`.
  Result<BlockDescriptor> AllocateBlock(std::string_view name, uint32_t index,
                                        std::span<const DatanodeId> exclude,
                                        std::vector<BlockDeletion>* deletions);

  // Picks and reserves a destination for relocating `block`. The returned
  // descriptor carries the block's current version for the later commit.
  Result<BlockDescriptor> ReserveRelocationTarget(
      BlockId block, std::span<const DatanodeId> exclude);

  // Compare-and-set on the block's location version.
  Result<uint64_t> CommitRelocation(BlockId block, DatanodeId new_node,
                                    uint64_t expected_version);

  Result<std::vector<NodeBlock>> ListBlocksOnNode(DatanodeId node) const;
  Status BeginDrain(DatanodeId node, TimePoint deadline);
  Result<uint64_t> MarkNodeTerminated(DatanodeId node);

  // expected_version == 0 deletes unconditionally.
  Status DeleteObject(std::string_view name, uint64_t expected_version,
                      std::vector<BlockDeletion>* deletions);

  std::vector<DatanodeInfo> ClusterStatus() const;
  NamenodeCounters counters() const;

  // Verifies the structural invariants; used by tests.
  Status CheckInvariants() const;

 private:
  struct BlockEntry {
    std::string object;
    uint32_t index = 0;
    uint64_t length = 0;
    DatanodeId location;  // kLostLocation once Lost
    uint64_t version = 1;
  };
  struct ObjectEntry {
    uint64_t size = 0;
    uint64_t version = 0;
    bool sealed = false;
    std::vector<BlockId> blocks;
  };
  struct NodeEntry {
    std::string address;
    uint64_t capacity = 0;
    uint64_t reserved = 0;
    NodeState state = NodeState::kActive;
    TimePoint deadline{};
    TimePoint last_heartbeat{};
    std::unordered_set<BlockId> blocks;
  };

  Result<DatanodeId> PickNodeLocked(std::span<const DatanodeId> exclude,
                                    DatanodeId also_exclude);
  BlockId PlaceNewBlockLocked(const std::string& object, uint32_t index,
                              uint64_t length, DatanodeId node);
  void RemoveBlockLocked(BlockId id, std::vector<BlockDeletion>* deletions);
  void DropReservationLocked(BlockId id);
  uint64_t MarkTerminatedLocked(DatanodeId node);
  BlockDescriptor DescribeLocked(BlockId id, const BlockEntry& b) const;
  ObjectMetadata DescribeObjectLocked(const std::string& name,
                                      const ObjectEntry& o) const;
  uint64_t NextVersionLocked() { return next_object_version_++; }

  const NamenodeConfig config_;
  Clock* const clock_;

  mutable std::mutex mu_;
  std::map<std::string, ObjectEntry, std::less<>> objects_;
  std::unordered_map<BlockId, BlockEntry> blocks_;
  std::map<DatanodeId, NodeEntry> nodes_;
  std::unordered_map<BlockId, DatanodeId> reservations_;
  uint32_t next_node_id_ = 1;
  uint64_t next_block_id_ = 1;
  uint64_t next_object_version_ = 1;
  DatanodeId last_placed_;
  NamenodeCounters counters_;
};

}  // namespace ess

#endif  // ESS_NAMENODE_NAMENODE_H_
