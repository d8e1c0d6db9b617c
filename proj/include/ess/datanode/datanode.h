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

#ifndef ESS_DATANODE_DATANODE_H_
#define ESS_DATANODE_DATANODE_H_

#include <atomic>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ess/common/token_bucket.h"
#include "ess/datanode/block_store.h"
#include "ess/protocol/rpc.h"
#include "ess/protocol/stubs.h"

namespace ess {

struct DatanodeOptions {
  uint64_t capacity_blocks = 256;
  // Used only when running without a namenode; otherwise the namenode's
  // block size is adopted at registration.
  uint64_t block_size = kDefaultBlockSize;
  // Bytes per second on block payloads; nullopt means unlimited.
  std::optional<double> egress_bytes_per_sec;
  std::optional<double> ingress_bytes_per_sec;
  // Empty runs standalone (no registration, no heartbeats).
  std::string namenode_address;
  Duration heartbeat_interval = std::chrono::seconds(1);
  // Hosts besides loopback allowed to send EnterDraining/Terminate.
  std::vector<std::string> control_peers;
};

struct DatanodeCounters {
  uint64_t writes_accepted = 0;
  uint64_t writes_rejected_draining = 0;
  uint64_t bytes_read = 0;
  uint64_t bytes_written = 0;
};

class Datanode {
 public:
  explicit Datanode(DatanodeOptions options);
  ~Datanode();

  Datanode(const Datanode&) = delete;
  Datanode& operator=(const Datanode&) = delete;

  // Listens, then registers with the namenode when one is configured.
  Result<HostPort> Start(const HostPort& listen);

  DatanodeId id() const { return id_; }
  std::string address() const { return server_.address().ToString(); }
  NodeState state() const;

  Status WriteBlock(const WriteBlockRequest& req);
  Result<ReadBlockResponse> ReadBlock(const ReadBlockRequest& req);
  void DeleteBlock(BlockId id);
  Status EnterDraining(TimePoint deadline);
  // Drops every block and closes every connection. Idempotent.
  void Terminate();

  size_t block_count() const;
  uint64_t StoreDigest() const;
  DatanodeCounters counters() const;

  std::optional<Message> Handle(const Message& request, const PeerInfo& peer);

 private:
  bool IsControlPeer(const PeerInfo& peer) const;
  // Sleeps until `t`; false if the node was terminated meanwhile.
  bool WaitUntil(TimePoint t);
  void HeartbeatLoop();

  const DatanodeOptions options_;
  std::optional<TokenBucket> egress_;
  std::optional<TokenBucket> ingress_;
  RpcServer server_;
  std::shared_ptr<RpcClient> rpc_;
  DatanodeId id_;

  mutable std::mutex mu_;
  NodeState state_ = NodeState::kActive;
  TimePoint deadline_{};
  BlockStore store_;
  DatanodeCounters counters_;

  std::mutex wait_mu_;
  std::condition_variable wait_cv_;
  std::atomic<bool> terminated_{false};
  std::thread heartbeat_thread_;
};

}  // namespace ess

#endif  // ESS_DATANODE_DATANODE_H_
