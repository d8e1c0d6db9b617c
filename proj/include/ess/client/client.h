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

#ifndef ESS_CLIENT_CLIENT_H_
#define ESS_CLIENT_CLIENT_H_

#include <array>
#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "ess/client/metadata_cache.h"
#include "ess/protocol/stubs.h"

namespace ess {

struct RetryPolicy {
  // Data attempts per block beyond the first.
  uint32_t max_retries = 5;
  Duration drain_poll_interval = std::chrono::milliseconds(250);
  // Delay before retry i; the last entry repeats.
  std::vector<Duration> backoff = {
      std::chrono::milliseconds(0), std::chrono::milliseconds(100),
      std::chrono::milliseconds(200), std::chrono::milliseconds(400),
      std::chrono::milliseconds(800)};

  Duration BackoffFor(uint32_t retry) const;
};

struct ClientOptions {
  std::string namenode_address;
  RetryPolicy retry;
  size_t cache_capacity = 4096;
  // Concurrent block transfers per object.
  int fan_out = 8;
  // Deleting a missing object succeeds instead of returning NotFound.
  bool idempotent_delete = false;
  Duration call_timeout = std::chrono::seconds(30);
};

struct ClientStats {
  uint64_t metadata_fetches = 0;
  uint64_t retries = 0;         // repeated data attempts
  uint64_t reallocations = 0;   // blocks re-placed during a put
  uint64_t data_unavailable = 0;
};

// Thread-safe handle for object I/O against one cluster.
class Client {
 public:
  explicit Client(ClientOptions options,
                  std::shared_ptr<RpcClient> rpc = nullptr,
                  Clock* clock = SystemClock::Get());

  Result<ObjectMetadata> PutObject(const std::string& name,
                                   std::span<const uint8_t> data);
  Result<std::vector<uint8_t>> GetObject(const std::string& name);
  Status DeleteObject(const std::string& name);

  void Invalidate(const std::string& name);
  // Bypasses the cache; never returns a version older than one this client
  // has already seen.
  Result<ObjectMetadata> LookupFresh(const std::string& name);
  // Cached metadata when present, otherwise fetched.
  Result<ObjectMetadata> Stat(const std::string& name);

  using Generator = std::function<Result<std::vector<uint8_t>>()>;
  // Reads `name`; if a block is lost, regenerates the object with
  // `generator`, stores it and returns it.
  Result<std::vector<uint8_t>> RecomputeHook(const std::string& name,
                                             const Generator& generator);

  ClientStats stats() const;
  MetadataCache& cache() { return cache_; }
  const ClientOptions& options() const { return options_; }

 private:
  // Returns metadata newer than `seen_version`, fetching at most once per
  // object even when many block readers ask at the same time.
  Result<ObjectMetadata> Refresh(const std::string& name,
                                 uint64_t seen_version);
  Result<BlockDescriptor> WriteOneBlock(const std::string& name,
                                        BlockDescriptor desc,
                                        std::span<const uint8_t> data);
  Status ReadOneBlock(const std::string& name, const ObjectMetadata& meta,
                      uint32_t index, std::span<uint8_t> out);
  Deadline CallDeadline() const;
  // Runs fn(0..n-1) on up to fan_out threads; returns the first failure.
  Status ForEachBlock(size_t n, const std::function<Status(size_t)>& fn);

  const ClientOptions options_;
  std::shared_ptr<RpcClient> rpc_;
  Clock* const clock_;
  NamenodeStub namenode_;
  DatanodeStub datanodes_;
  MetadataCache cache_;
  std::array<std::mutex, 32> refresh_mu_;

  std::atomic<uint64_t> metadata_fetches_{0};
  std::atomic<uint64_t> retries_{0};
  std::atomic<uint64_t> reallocations_{0};
  std::atomic<uint64_t> data_unavailable_{0};
};

}  // namespace ess

#endif  // ESS_CLIENT_CLIENT_H_
