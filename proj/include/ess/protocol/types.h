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

#ifndef ESS_PROTOCOL_TYPES_H_
#define ESS_PROTOCOL_TYPES_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ess/common/status.h"

namespace ess {

template <typename Tag, typename Rep>
struct StrongId {
  using rep_type = Rep;
  Rep value{};

  constexpr auto operator<=>(const StrongId&) const = default;
};

template <typename Tag, typename Rep>
std::ostream& operator<<(std::ostream& os, StrongId<Tag, Rep> id) {
  return os << id.value;
}

// Namenode-issued, starts at 1, never reused.
using BlockId = StrongId<struct BlockIdTag, uint64_t>;
// Assigned at registration, starts at 1. Zero marks a Lost block location.
using DatanodeId = StrongId<struct DatanodeIdTag, uint32_t>;

inline constexpr DatanodeId kLostLocation{0};
inline constexpr uint64_t kDefaultBlockSize = 1 << 20;
inline constexpr size_t kMaxObjectNameBytes = 4096;
inline constexpr uint8_t kProtocolVersion = 1;

// Non-empty '/'-separated path, no empty, "." or ".." segments, valid UTF-8.
Status ValidateObjectName(std::string_view name);
bool IsValidUtf8(std::string_view s);

enum class NodeState : uint8_t {
  kActive = 0,
  kDraining = 1,
  kTerminated = 2,
};

std::string_view NodeStateName(NodeState state);

// Active->Draining, Draining->Terminated, Active->Terminated.
bool IsAllowedTransition(NodeState from, NodeState to);

struct BlockDescriptor {
  BlockId block_id;
  DatanodeId datanode;  // kLostLocation when the block is Lost
  std::string address;  // datanode host:port, empty when Lost
  uint64_t length = 0;
  uint32_t index = 0;
  uint64_t version = 0;  // per-block location version, CAS token

  bool lost() const { return datanode == kLostLocation; }
  bool operator==(const BlockDescriptor&) const = default;
};

struct ObjectMetadata {
  std::string name;
  uint64_t size = 0;
  // Drawn from one namenode-wide counter, so it also grows across
  // delete/re-create of the same name.
  uint64_t version = 0;
  bool sealed = false;
  std::vector<BlockDescriptor> blocks;

  bool operator==(const ObjectMetadata&) const = default;
};

struct DatanodeInfo {
  DatanodeId id;
  std::string address;
  uint64_t capacity_blocks = 0;
  uint64_t used_blocks = 0;
  NodeState state = NodeState::kActive;
  int64_t deadline_ms = 0;

  bool operator==(const DatanodeInfo&) const = default;
};

// One entry of a node's block list: the block and its owning object.
struct NodeBlock {
  std::string object;
  BlockDescriptor block;

  bool operator==(const NodeBlock&) const = default;
};

// Number of blocks and their lengths for an object of `size` bytes.
std::vector<uint64_t> SplitIntoBlocks(uint64_t size, uint64_t block_size);

}  // namespace ess

template <typename Tag, typename Rep>
struct std::hash<ess::StrongId<Tag, Rep>> {
  size_t operator()(ess::StrongId<Tag, Rep> id) const noexcept {
    return std::hash<Rep>()(id.value);
  }
};

#endif  // ESS_PROTOCOL_TYPES_H_
