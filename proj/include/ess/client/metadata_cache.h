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

#ifndef ESS_CLIENT_METADATA_CACHE_H_
#define ESS_CLIENT_METADATA_CACHE_H_

#include <list>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "ess/common/clock.h"
#include "ess/protocol/types.h"

namespace ess {

// Capacity-bounded LRU of object metadata. An entry is only ever replaced by
// metadata of an equal or newer version, so a late reply cannot roll a
// cached location back.
class MetadataCache {
 public:
  explicit MetadataCache(size_t capacity = 4096);

  std::optional<ObjectMetadata> Lookup(const std::string& name);
  // Returns whatever the cache holds for `name` afterwards.
  ObjectMetadata Update(ObjectMetadata meta, TimePoint fetched_at);
  void Invalidate(const std::string& name);

  size_t size() const;
  size_t capacity() const { return capacity_; }

 private:
  struct Entry {
    ObjectMetadata meta;
    TimePoint fetched_at;
    std::list<std::string>::iterator lru;
  };

  const size_t capacity_;
  mutable std::mutex mu_;
  std::list<std::string> lru_;  // front is most recent
  std::unordered_map<std::string, Entry> entries_;
};

}  // namespace ess

#endif  // ESS_CLIENT_METADATA_CACHE_H_
