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

#ifndef ESS_DATANODE_BLOCK_STORE_H_
#define ESS_DATANODE_BLOCK_STORE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "ess/common/status.h"
#include "ess/protocol/types.h"

namespace ess {

// Block bytes plus the CRC of the written extent [0, data.size()).
struct StoredBlock {
  std::shared_ptr<const std::vector<uint8_t>> data;
  uint32_t crc = 0;
};

// In-memory block map. Not synchronized; the owning Datanode serializes
// access. Stored buffers are immutable, so readers may keep a StoredBlock
// after releasing the owner's lock.
class BlockStore {
 public:
  BlockStore(uint64_t capacity_blocks, uint64_t block_size)
      : capacity_(capacity_blocks), block_size_(block_size) {}

  // `payload_crc` must already have been verified against `data`.
  Status Write(BlockId id, uint64_t offset, std::span<const uint8_t> data,
               uint32_t payload_crc);
  Result<StoredBlock> Get(BlockId id) const;
  void Delete(BlockId id) { blocks_.erase(id); }
  void Clear() { blocks_.clear(); }

  size_t size() const { return blocks_.size(); }
  uint64_t capacity() const { return capacity_; }
  uint64_t block_size() const { return block_size_; }
  void set_block_size(uint64_t block_size) { block_size_ = block_size; }

  // Order-independent fingerprint of every (id, extent, crc) triple.
  uint64_t Digest() const;

 private:
  uint64_t capacity_;
  uint64_t block_size_;
  std::map<BlockId, StoredBlock> blocks_;
};

}  // namespace ess

#endif  // ESS_DATANODE_BLOCK_STORE_H_
