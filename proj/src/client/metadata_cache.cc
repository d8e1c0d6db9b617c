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

#include "ess/client/metadata_cache.h"

#include <algorithm>

namespace ess {

MetadataCache::MetadataCache(size_t capacity)
    : capacity_(std::max<size_t>(capacity, 1)) {}

std::optional<ObjectMetadata> MetadataCache::Lookup(const std::string& name) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(name);
  if (it == entries_.end()) return std::nullopt;
  lru_.splice(lru_.begin(), lru_, it->second.lru);
  return it->second.meta;
}

ObjectMetadata MetadataCache::Update(ObjectMetadata meta, TimePoint fetched_at) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(meta.name);
  if (it != entries_.end()) {
    lru_.splice(lru_.begin(), lru_, it->second.lru);
    if (meta.version >= it->second.meta.version) {
      it->second.meta = std::move(meta);
      it->second.fetched_at = fetched_at;
    }
    return it->second.meta;
  }
  if (entries_.size() >= capacity_) {
    entries_.erase(lru_.back());
    lru_.pop_back();
  }
  lru_.push_front(meta.name);
  auto& e = entries_[meta.name];
  e.lru = lru_.begin();
  e.fetched_at = fetched_at;
  e.meta = std::move(meta);
  return e.meta;
}

void MetadataCache::Invalidate(const std::string& name) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(name);
  if (it == entries_.end()) return;
  lru_.erase(it->second.lru);
  entries_.erase(it);
}

size_t MetadataCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

}  // namespace ess
