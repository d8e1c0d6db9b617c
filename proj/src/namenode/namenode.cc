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

#include "ess/namenode/namenode.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ess/protocol/net.h"
#include "json.hpp"

namespace ess {

Result<NamenodeConfig> ParseNamenodeConfig(std::string_view text) {
  NamenodeConfig config;
  try {
    auto j = nlohmann::json::parse(text);
    if (j.contains("block_size_bytes")) {
      config.block_size = j.at("block_size_bytes").get<uint64_t>();
    }
    if (j.contains("heartbeat_timeout_ms")) {
      config.heartbeat_timeout = std::chrono::milliseconds(
          j.at("heartbeat_timeout_ms").get<int64_t>());
    }
    if (j.contains("placement_policy")) {
      config.placement_policy = j.at("placement_policy").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    return InvalidArgument(std::string("namenode config: ") + e.what());
  }
  if (config.block_size == 0) {
    return InvalidArgument("block_size_bytes must be positive");
  }
  if (config.heartbeat_timeout <= Duration::zero()) {
    return InvalidArgument("heartbeat_timeout_ms must be positive");
  }
  if (config.placement_policy != "round_robin") {
    return InvalidArgument("unsupported placement_policy '" +
                           config.placement_policy + "'");
  }
  return config;
}

Result<NamenodeConfig> LoadNamenodeConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) return InvalidArgument("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseNamenodeConfig(ss.str());
}

Namenode::Namenode(NamenodeConfig config, Clock* clock)
    : config_(std::move(config)), clock_(clock) {}

Result<DatanodeId> Namenode::RegisterDatanode(std::string_view address,
                                              uint64_t capacity_blocks) {
  auto parsed = ParseHostPort(address);
  if (!parsed.ok()) return parsed.status();
  if (capacity_blocks == 0) {
    return ProtocolError("capacity_blocks must be positive");
  }
  std::lock_guard<std::mutex> lock(mu_);
  DatanodeId id{next_node_id_++};
  NodeEntry& node = nodes_[id];
  node.address = std::string(address);
  node.capacity = capacity_blocks;
  node.last_heartbeat = clock_->Now();
  return id;
}

Status Namenode::Heartbeat(DatanodeId id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = nodes_.find(id);
  if (it == nodes_.end()) return NotFound("unknown datanode");
  if (it->second.state == NodeState::kTerminated) {
    return Conflict("datanode is terminated");
  }
  it->second.last_heartbeat = clock_->Now();
  return Status::Ok();
}

std::vector<std::pair<DatanodeId, uint64_t>> Namenode::ReapExpired() {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::pair<DatanodeId, uint64_t>> reaped;
  TimePoint now = clock_->Now();
  for (auto& [id, node] : nodes_) {
    if (node.state != NodeState::kTerminated &&
        now - node.last_heartbeat > config_.heartbeat_timeout) {
      reaped.emplace_back(id, MarkTerminatedLocked(id));
    }
  }
  return reaped;
}

Result<DatanodeId> Namenode::PickNodeLocked(
    std::span<const DatanodeId> exclude, DatanodeId also_exclude) {
  auto eligible = [&](const auto& entry) {
    const auto& [id, node] = entry;
    return node.state == NodeState::kActive && id != also_exclude &&
           std::find(exclude.begin(), exclude.end(), id) == exclude.end() &&
           node.blocks.size() + node.reserved < node.capacity;
  };
  // Round-robin: first eligible node after the last one placed on.
  auto start = nodes_.upper_bound(last_placed_);
  auto it = std::find_if(start, nodes_.end(), eligible);
  if (it == nodes_.end()) {
    it = std::find_if(nodes_.begin(), start, eligible);
    if (it == start) {
      return CapacityExhausted("no active datanode with free capacity");
    }
  }
  last_placed_ = it->first;
  return it->first;
}

BlockId Namenode::PlaceNewBlockLocked(const std::string& object,
                                      uint32_t index, uint64_t length,
                                      DatanodeId node) {
  BlockId id{next_block_id_++};
  blocks_.emplace(id, BlockEntry{object, index, length, node, 1});
  nodes_.at(node).blocks.insert(id);
  ++counters_.blocks_allocated;
  return id;
}

void Namenode::DropReservationLocked(BlockId id) {
  auto it = reservations_.find(id);
  if (it == reservations_.end()) return;
  auto node = nodes_.find(it->second);
  if (node != nodes_.end() && node->second.reserved > 0) {
    --node->second.reserved;
  }
  reservations_.erase(it);
}

void Namenode::RemoveBlockLocked(BlockId id,
                                 std::vector<BlockDeletion>* deletions) {
  auto it = blocks_.find(id);
  if (it == blocks_.end()) return;
  const BlockEntry& b = it->second;
  if (b.location == kLostLocation) {
    --counters_.blocks_lost;
  } else {
    NodeEntry& node = nodes_.at(b.location);
    node.blocks.erase(id);
    if (deletions != nullptr && node.state != NodeState::kTerminated) {
      deletions->push_back({node.address, id});
    }
  }
  DropReservationLocked(id);
  blocks_.erase(it);
  ++counters_.blocks_deleted;
}

BlockDescriptor Namenode::DescribeLocked(BlockId id,
                                         const BlockEntry& b) const {
  BlockDescriptor d;
  d.block_id = id;
  d.datanode = b.location;
  if (b.location != kLostLocation) d.address = nodes_.at(b.location).address;
  d.length = b.length;
  d.index = b.index;
  d.version = b.version;
  return d;
}

ObjectMetadata Namenode::DescribeObjectLocked(const std::string& name,
                                              const ObjectEntry& o) const {
  ObjectMetadata m;
  m.name = name;
  m.size = o.size;
  m.version = o.version;
  m.sealed = o.sealed;
  m.blocks.reserve(o.blocks.size());
  for (BlockId id : o.blocks) m.blocks.push_back(DescribeLocked(id, blocks_.at(id)));
  return m;
}

Result<ObjectMetadata> Namenode::CreateObject(std::string_view name,
                                              uint64_t size) {
  Status valid = ValidateObjectName(name);
  if (!valid.ok()) return ProtocolError(valid.message());
  std::lock_guard<std::mutex> lock(mu_);
  if (objects_.find(name) != objects_.end()) {
    return AlreadyExists("object '" + std::string(name) + "' exists");
  }
  std::string key(name);
  ObjectEntry obj;
  obj.size = size;
  std::vector<uint64_t> lengths = SplitIntoBlocks(size, config_.block_size);
  for (uint32_t i = 0; i < lengths.size(); ++i) {
    Result<DatanodeId> node = PickNodeLocked({}, kLostLocation);
    if (!node.ok()) {
      for (BlockId id : obj.blocks) RemoveBlockLocked(id, nullptr);
      return node.status();
    }
    obj.blocks.push_back(PlaceNewBlockLocked(key, i, lengths[i], *node));
  }
  obj.version = NextVersionLocked();
  auto [it, inserted] = objects_.emplace(std::move(key), std::move(obj));
  return DescribeObjectLocked(it->first, it->second);
}

Result<ObjectMetadata> Namenode::SealObject(std::string_view name) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = objects_.find(name);
  if (it == objects_.end()) return NotFound("no object '" + std::string(name) + "'");
  if (it->second.sealed) return Conflict("object already sealed");
  it->second.sealed = true;
  it->second.version = NextVersionLocked();
  return DescribeObjectLocked(it->first, it->second);
}

Result<ObjectMetadata> Namenode::GetMetadata(std::string_view name) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = objects_.find(name);
  if (it == objects_.end()) return NotFound("no object '" + std::string(name) + "'");
  return DescribeObjectLocked(it->first, it->second);
}

Result<BlockDescriptor> Namenode::AllocateBlock(
    std::string_view name, uint32_t index, std::span<const DatanodeId> exclude,
    std::vector<BlockDeletion>* deletions) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = objects_.find(name);
  if (it == objects_.end()) return NotFound("no object '" + std::string(name) + "'");
  ObjectEntry& obj = it->second;
  if (obj.sealed) return Conflict("object is sealed");
  if (index >= obj.blocks.size()) return ProtocolError("block index out of range");

  BlockId old_id = obj.blocks[index];
  uint64_t length = blocks_.at(old_id).length;
  ESS_ASSIGN_OR_RETURN(DatanodeId node, PickNodeLocked(exclude, kLostLocation));
  RemoveBlockLocked(old_id, deletions);
  BlockId id = PlaceNewBlockLocked(it->first, index, length, node);
  obj.blocks[index] = id;
  obj.version = NextVersionLocked();
  return DescribeLocked(id, blocks_.at(id));
}

Result<BlockDescriptor> Namenode::ReserveRelocationTarget(
    BlockId block, std::span<const DatanodeId> exclude) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = blocks_.find(block);
  if (it == blocks_.end()) return NotFound("unknown block");
  if (it->second.location == kLostLocation) return Conflict("block is lost");
  DropReservationLocked(block);
  ESS_ASSIGN_OR_RETURN(DatanodeId node,
                       PickNodeLocked(exclude, it->second.location));
  ++nodes_.at(node).reserved;
  reservations_[block] = node;
  BlockDescriptor d = DescribeLocked(block, it->second);
  d.datanode = node;
  d.address = nodes_.at(node).address;
  return d;
}

Result<uint64_t> Namenode::CommitRelocation(BlockId block, DatanodeId new_node,
                                            uint64_t expected_version) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = blocks_.find(block);
  if (it == blocks_.end()) return NotFound("unknown block");
  BlockEntry& b = it->second;
  if (b.location == kLostLocation) return Conflict("block is lost");
  if (b.version != expected_version) {
    return StaleLocation("block version is " + std::to_string(b.version) +
                         ", expected " + std::to_string(expected_version));
  }
  auto dst = nodes_.find(new_node);
  if (dst == nodes_.end()) return NotFound("unknown datanode");
  if (dst->second.state != NodeState::kActive) {
    return Conflict("destination datanode is not active");
  }
  if (new_node == b.location) return Conflict("block already on that node");

  auto res = reservations_.find(block);
  bool reserved_here = res != reservations_.end() && res->second == new_node;
  if (!reserved_here &&
      dst->second.blocks.size() + dst->second.reserved >= dst->second.capacity) {
    return CapacityExhausted("destination datanode is full");
  }
  DropReservationLocked(block);

  nodes_.at(b.location).blocks.erase(block);
  dst->second.blocks.insert(block);
  b.location = new_node;
  ++b.version;
  objects_.find(b.object)->second.version = NextVersionLocked();
  return b.version;
}

Result<std::vector<NodeBlock>> Namenode::ListBlocksOnNode(
    DatanodeId id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = nodes_.find(id);
  if (it == nodes_.end()) return NotFound("unknown datanode");
  std::vector<NodeBlock> out;
  out.reserve(it->second.blocks.size());
  for (BlockId block : it->second.blocks) {
    const BlockEntry& b = blocks_.at(block);
    out.push_back(NodeBlock{b.object, DescribeLocked(block, b)});
  }
  std::sort(out.begin(), out.end(), [](const NodeBlock& a, const NodeBlock& b) {
    return a.block.block_id < b.block.block_id;
  });
  return out;
}

Status Namenode::BeginDrain(DatanodeId id, TimePoint deadline) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = nodes_.find(id);
  if (it == nodes_.end()) return NotFound("unknown datanode");
  if (it->second.state != NodeState::kActive) {
    return Conflict(std::string("datanode is ") +
                    std::string(NodeStateName(it->second.state)));
  }
  it->second.state = NodeState::kDraining;
  it->second.deadline = deadline;
  // Reservations pointing at this node can no longer commit.
  for (auto r = reservations_.begin(); r != reservations_.end();) {
    r = r->second == id ? reservations_.erase(r) : std::next(r);
  }
  it->second.reserved = 0;
  return Status::Ok();
}

uint64_t Namenode::MarkTerminatedLocked(DatanodeId id) {
  NodeEntry& node = nodes_.at(id);
  node.state = NodeState::kTerminated;
  uint64_t lost = 0;
  std::unordered_set<std::string> touched;
  for (BlockId block : node.blocks) {
    BlockEntry& b = blocks_.at(block);
    b.location = kLostLocation;
    ++b.version;
    DropReservationLocked(block);
    touched.insert(b.object);
    ++lost;
  }
  node.blocks.clear();
  for (auto r = reservations_.begin(); r != reservations_.end();) {
    r = r->second == id ? reservations_.erase(r) : std::next(r);
  }
  node.reserved = 0;
  // Sorted so version assignment does not depend on hash order.
  std::vector<std::string> names(touched.begin(), touched.end());
  std::sort(names.begin(), names.end());
  for (const auto& name : names) {
    objects_.find(name)->second.version = NextVersionLocked();
  }
  counters_.blocks_lost += lost;
  return lost;
}

Result<uint64_t> Namenode::MarkNodeTerminated(DatanodeId id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = nodes_.find(id);
  if (it == nodes_.end()) return NotFound("unknown datanode");
  if (it->second.state == NodeState::kTerminated) {
    return Conflict("datanode already terminated");
  }
  return MarkTerminatedLocked(id);
}

Status Namenode::DeleteObject(std::string_view name, uint64_t expected_version,
                              std::vector<BlockDeletion>* deletions) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = objects_.find(name);
  if (it == objects_.end()) return NotFound("no object '" + std::string(name) + "'");
  if (expected_version != 0 && it->second.version != expected_version) {
    return StaleLocation("object version changed");
  }
  for (BlockId id : it->second.blocks) RemoveBlockLocked(id, deletions);
  objects_.erase(it);
  return Status::Ok();
}

std::vector<DatanodeInfo> Namenode::ClusterStatus() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<DatanodeInfo> out;
  for (const auto& [id, node] : nodes_) {
    DatanodeInfo info;
    info.id = id;
    info.address = node.address;
    info.capacity_blocks = node.capacity;
    info.used_blocks = node.blocks.size();
    info.state = node.state;
    info.deadline_ms =
        node.state == NodeState::kActive ? 0 : ToWireMillis(node.deadline);
    out.push_back(std::move(info));
  }
  return out;
}

NamenodeCounters Namenode::counters() const {
  std::lock_guard<std::mutex> lock(mu_);
  return counters_;
}

Status Namenode::CheckInvariants() const {
  std::lock_guard<std::mutex> lock(mu_);
  uint64_t used = 0;
  uint64_t lost = 0;
  for (const auto& [id, node] : nodes_) {
    if (node.blocks.size() + node.reserved > node.capacity) {
      return Internal("datanode " + std::to_string(id.value) + " over capacity");
    }
    if (node.state == NodeState::kTerminated && !node.blocks.empty()) {
      return Internal("terminated datanode still holds blocks");
    }
    for (BlockId b : node.blocks) {
      auto bit = blocks_.find(b);
      if (bit == blocks_.end() || bit->second.location != id) {
        return Internal("node block set disagrees with block map");
      }
    }
    used += node.blocks.size();
  }
  for (const auto& [id, b] : blocks_) {
    if (b.location == kLostLocation) {
      ++lost;
    } else if (!nodes_.at(b.location).blocks.contains(id)) {
      return Internal("block missing from its node's set");
    }
  }
  if (lost != counters_.blocks_lost) return Internal("lost counter drift");
  if (used + lost !=
      counters_.blocks_allocated - counters_.blocks_deleted) {
    return Internal("block conservation violated");
  }
  for (const auto& [name, obj] : objects_) {
    uint64_t size = 0;
    for (uint32_t i = 0; i < obj.blocks.size(); ++i) {
      const BlockEntry& b = blocks_.at(obj.blocks[i]);
      if (b.index != i || b.object != name) return Internal("block index gap");
      if (i + 1 < obj.blocks.size() && b.length != config_.block_size) {
        return Internal("short non-final block");
      }
      size += b.length;
    }
    if (size != obj.size) return Internal("object size != sum of blocks");
  }
  return Status::Ok();
}

}  // namespace ess
