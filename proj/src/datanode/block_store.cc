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

#include "ess/datanode/block_store.h"

#include <algorithm>
#include <cstring>

#include "ess/common/crc.h"

namespace ess {

Status BlockStore::Write(BlockId id, uint64_t offset,
                         std::span<const uint8_t> data, uint32_t payload_crc) {
  if (offset > block_size_ || data.size() > block_size_ - offset) {
    return ProtocolError("write past the end of the block");
  }
  auto it = blocks_.find(id);
  if (it == blocks_.end()) {
    if (blocks_.size() >= capacity_) {
      return CapacityExhausted("datanode holds " + std::to_string(capacity_) +
                               " blocks");
    }
    if (offset == 0) {
      auto buf = std::make_shared<const std::vector<uint8_t>>(data.begin(),
                                                              data.end());
      blocks_.emplace(id, StoredBlock{std::move(buf), payload_crc});
      return Status::Ok();
    }
    it = blocks_.emplace(id, StoredBlock{std::make_shared<std::vector<uint8_t>>(),
                                         Crc32({})})
             .first;
  }

  const std::vector<uint8_t>& old = *it->second.data;
  uint64_t end = offset + data.size();
  auto next = std::make_shared<std::vector<uint8_t>>(
      std::max<uint64_t>(old.size(), end));
  std::memcpy(next->data(), old.data(), old.size());
  std::memcpy(next->data() + offset, data.data(), data.size());
  uint32_t crc;
  if (offset == old.size()) {
    crc = Crc32Combine(it->second.crc, payload_crc, data.size());
  } else {
    crc = Crc32(*next);
  }
  it->second = StoredBlock{std::move(next), crc};
  return Status::Ok();
}

Result<StoredBlock> BlockStore::Get(BlockId id) const {
  auto it = blocks_.find(id);
  if (it == blocks_.end()) {
    return NotFound("block " + std::to_string(id.value) + " not stored here");
  }
  return it->second;
}

uint64_t BlockStore::Digest() const {
  // FNV-1a over the sorted map.
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [id, block] : blocks_) {
    mix(id.value);
    mix(block.data->size());
    mix(block.crc);
  }
  return h;
}

}  // namespace ess
