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

#include "ess/client/client.h"

#include <algorithm>
#include <optional>
#include <thread>

#include "ess/common/crc.h"

namespace ess {
namespace {

bool IsRetryableRead(StatusCode code) {
  return code == StatusCode::kNotFound || code == StatusCode::kUnavailable ||
         code == StatusCode::kDeadlineExceeded;
}

bool IsRetryableWrite(StatusCode code) {
  return code == StatusCode::kNodeDraining || code == StatusCode::kUnavailable ||
         code == StatusCode::kDeadlineExceeded;
}

bool HasLostBlock(const ObjectMetadata& meta) {
  return std::any_of(meta.blocks.begin(), meta.blocks.end(),
                     [](const BlockDescriptor& b) { return b.lost(); });
}

std::vector<uint64_t> BlockOffsets(const ObjectMetadata& meta) {
  std::vector<uint64_t> offsets(meta.blocks.size());
  uint64_t at = 0;
  for (size_t i = 0; i < meta.blocks.size(); ++i) {
    offsets[i] = at;
    at += meta.blocks[i].length;
  }
  return offsets;
}

}  // namespace

Duration RetryPolicy::BackoffFor(uint32_t retry) const {
  if (backoff.empty()) return Duration::zero();
  return backoff[std::min<size_t>(retry, backoff.size() - 1)];
}

Client::Client(ClientOptions options, std::shared_ptr<RpcClient> rpc,
               Clock* clock)
    : options_(std::move(options)),
      rpc_(rpc ? std::move(rpc) : std::make_shared<RpcClient>()),
      clock_(clock),
      namenode_(rpc_, options_.namenode_address),
      datanodes_(rpc_),
      cache_(options_.cache_capacity) {}

Deadline Client::CallDeadline() const {
  return std::chrono::steady_clock::now() + options_.call_timeout;
}

ClientStats Client::stats() const {
  return {metadata_fetches_.load(), retries_.load(), reallocations_.load(),
          data_unavailable_.load()};
}

Status Client::ForEachBlock(size_t n, const std::function<Status(size_t)>& fn) {
  size_t workers = std::min<size_t>(n, std::max(options_.fan_out, 1));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) ESS_RETURN_IF_ERROR(fn(i));
    return Status::Ok();
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mu;
  Status first;
  auto work = [&] {
    for (size_t i = next++; i < n && !failed.load(); i = next++) {
      Status s = fn(i);
      if (!s.ok()) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failed.exchange(true)) first = std::move(s);
      }
    }
  };
  std::vector<std::thread> threads;
  for (size_t i = 0; i < workers; ++i) threads.emplace_back(work);
  for (auto& t : threads) t.join();
  return first;
}

Result<ObjectMetadata> Client::Refresh(const std::string& name,
                                       uint64_t seen_version) {
  std::lock_guard<std::mutex> lock(
      refresh_mu_[std::hash<std::string>{}(name) % refresh_mu_.size()]);
  if (auto cached = cache_.Lookup(name);
      cached && cached->version > seen_version) {
    return *cached;
  }
  return LookupFresh(name);
}

Result<ObjectMetadata> Client::LookupFresh(const std::string& name) {
  ++metadata_fetches_;
  auto fetched = namenode_.GetMetadata(name);
  if (!fetched.ok()) {
    if (fetched.status().code() == StatusCode::kNotFound) cache_.Invalidate(name);
    return fetched.status();
  }
  if (!fetched.value().sealed) {
    cache_.Invalidate(name);
    return std::move(fetched).value();
  }
  return cache_.Update(std::move(fetched).value(), clock_->Now());
}

Result<ObjectMetadata> Client::Stat(const std::string& name) {
  if (auto cached = cache_.Lookup(name)) return *cached;
  return LookupFresh(name);
}

void Client::Invalidate(const std::string& name) { cache_.Invalidate(name); }

Result<BlockDescriptor> Client::WriteOneBlock(const std::string& name,
                                              BlockDescriptor desc,
                                              std::span<const uint8_t> data) {
  const uint32_t crc = Crc32(data);
  std::vector<DatanodeId> exclude;
  for (uint32_t attempt = 0;; ++attempt) {
    Status s = datanodes_.WriteBlock(
        desc.address, desc.block_id, 0,
        std::vector<uint8_t>(data.begin(), data.end()), crc, CallDeadline());
    if (s.ok()) return desc;
    if (!IsRetryableWrite(s.code()) || attempt >= options_.retry.max_retries) {
      return s;
    }
    ++retries_;
    exclude.push_back(desc.datanode);
    clock_->SleepFor(options_.retry.BackoffFor(attempt));
    // The namenode never places on a draining node, so a fresh placement
    // avoids the fenced one without waiting for the drain to finish.
    auto placed = namenode_.AllocateBlock(name, desc.index, exclude);
    while (!placed.ok() &&
           placed.status().code() == StatusCode::kCapacityExhausted &&
           attempt < options_.retry.max_retries) {
      ++attempt;
      ++retries_;
      clock_->SleepFor(options_.retry.drain_poll_interval);
      placed = namenode_.AllocateBlock(name, desc.index, exclude);
    }
    if (!placed.ok()) return placed.status();
    ++reallocations_;
    desc = std::move(placed).value();
  }
}

Result<ObjectMetadata> Client::PutObject(const std::string& name,
                                         std::span<const uint8_t> data) {
  ESS_ASSIGN_OR_RETURN(ObjectMetadata meta,
                       namenode_.CreateObject(name, data.size()));
  std::vector<uint64_t> offsets = BlockOffsets(meta);
  Status written = ForEachBlock(meta.blocks.size(), [&](size_t i) -> Status {
    const BlockDescriptor& b = meta.blocks[i];
    auto placed = WriteOneBlock(name, b, data.subspan(offsets[i], b.length));
    return placed.ok() ? Status::Ok() : placed.status();
  });
  if (!written.ok()) {
    (void)namenode_.DeleteObject(name);
    return written;
  }
  ESS_ASSIGN_OR_RETURN(ObjectMetadata sealed, namenode_.SealObject(name));
  return cache_.Update(std::move(sealed), clock_->Now());
}

Status Client::ReadOneBlock(const std::string& name, const ObjectMetadata& meta,
                            uint32_t index, std::span<uint8_t> out) {
  BlockDescriptor desc = meta.blocks[index];
  uint64_t seen = meta.version;
  for (uint32_t attempt = 0;; ++attempt) {
    if (desc.lost()) {
      ++data_unavailable_;
      return DataUnavailable("block " + std::to_string(index) + " of " + name +
                             " was lost");
    }
    auto read = datanodes_.ReadBlock(desc.address, desc.block_id, 0,
                                     desc.length, CallDeadline());
    Status err;
    if (read.ok()) {
      const auto& got = read.value();
      if (got.data.size() == desc.length && Crc32(got.data) == got.crc) {
        std::copy(got.data.begin(), got.data.end(), out.begin());
        return Status::Ok();
      }
      err = Unavailable("short or corrupt block read");
    } else {
      err = read.status();
    }
    if (!IsRetryableRead(err.code()) || attempt >= options_.retry.max_retries) {
      return err;
    }
    ++retries_;
    ESS_ASSIGN_OR_RETURN(ObjectMetadata fresh, Refresh(name, seen));
    if (!fresh.sealed || index >= fresh.blocks.size() ||
        fresh.blocks[index].block_id != desc.block_id) {
      return StaleLocation("object was replaced during the read");
    }
    const BlockDescriptor& next = fresh.blocks[index];
    bool moved = next.datanode != desc.datanode || next.version != desc.version;
    seen = std::max(seen, fresh.version);
    desc = next;
    if (!moved) clock_->SleepFor(options_.retry.BackoffFor(attempt));
  }
}

Result<std::vector<uint8_t>> Client::GetObject(const std::string& name) {
  std::optional<ObjectMetadata> cached = cache_.Lookup(name);
  for (int pass = 0;; ++pass) {
    ObjectMetadata meta;
    if (cached) {
      meta = std::move(*cached);
    } else {
      ESS_ASSIGN_OR_RETURN(meta, LookupFresh(name));
    }
    if (!meta.sealed) return NotFound("object " + name + " is still being written");

    std::vector<uint8_t> out(meta.size);
    std::vector<uint64_t> offsets = BlockOffsets(meta);
    Status s = ForEachBlock(meta.blocks.size(), [&](size_t i) {
      return ReadOneBlock(name, meta, static_cast<uint32_t>(i),
                          std::span<uint8_t>(out).subspan(
                              offsets[i], meta.blocks[i].length));
    });
    if (s.ok()) return out;
    if (s.code() == StatusCode::kNotFound) cache_.Invalidate(name);
    // A cached entry can describe a deleted and re-created object; start
    // over once from fresh metadata.
    if (s.code() != StatusCode::kStaleLocation || pass > 0) return s;
    cache_.Invalidate(name);
    cached.reset();
  }
}

Status Client::DeleteObject(const std::string& name) {
  Status s = namenode_.DeleteObject(name);
  cache_.Invalidate(name);
  if (s.code() == StatusCode::kNotFound && options_.idempotent_delete) {
    return Status::Ok();
  }
  return s;
}

Result<std::vector<uint8_t>> Client::RecomputeHook(const std::string& name,
                                                   const Generator& generator) {
  auto got = GetObject(name);
  if (got.ok() || got.status().code() != StatusCode::kDataUnavailable) {
    return got;
  }
  std::optional<std::vector<uint8_t>> produced;
  const TimePoint give_up = clock_->Now() + options_.call_timeout;
  while (true) {
    auto fresh = LookupFresh(name);
    if (!fresh.ok() && fresh.status().code() != StatusCode::kNotFound) {
      return fresh.status();
    }
    bool absent = !fresh.ok();
    if (fresh.ok() && HasLostBlock(fresh.value())) {
      // Conditional, so a copy another caller already regenerated survives.
      Status d = namenode_.DeleteObject(name, fresh.value().version);
      cache_.Invalidate(name);
      if (d.ok() || d.code() == StatusCode::kNotFound) {
        absent = true;
      } else if (d.code() != StatusCode::kStaleLocation) {
        return d;
      }
    } else if (fresh.ok() && fresh.value().sealed) {
      got = GetObject(name);
      if (got.ok()) return got;
      StatusCode c = got.status().code();
      if (c != StatusCode::kDataUnavailable && c != StatusCode::kNotFound) {
        return got;
      }
    }
    if (absent) {
      if (!produced) {
        ESS_ASSIGN_OR_RETURN(std::vector<uint8_t> bytes, generator());
        produced = std::move(bytes);
      }
      auto put = PutObject(name, *produced);
      if (put.ok()) return *produced;
      if (put.status().code() != StatusCode::kAlreadyExists) return put.status();
    }
    if (clock_->Now() >= give_up) {
      return DeadlineExceeded("object " + name + " was not regenerated in time");
    }
    clock_->SleepFor(options_.retry.drain_poll_interval);
  }
}

}  // namespace ess
