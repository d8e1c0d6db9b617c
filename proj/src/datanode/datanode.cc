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

#include "ess/datanode/datanode.h"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "ess/common/crc.h"

namespace ess {

Datanode::Datanode(DatanodeOptions options)
    : options_(std::move(options)),
      server_([this](const Message& m, const PeerInfo& peer) {
        return Handle(m, peer);
      }),
      rpc_(std::make_shared<RpcClient>()),
      store_(options_.capacity_blocks, options_.block_size) {
  if (options_.egress_bytes_per_sec) egress_.emplace(*options_.egress_bytes_per_sec);
  if (options_.ingress_bytes_per_sec) ingress_.emplace(*options_.ingress_bytes_per_sec);
}

Datanode::~Datanode() {
  Terminate();
  if (heartbeat_thread_.joinable()) heartbeat_thread_.join();
}

Result<HostPort> Datanode::Start(const HostPort& listen) {
  ESS_ASSIGN_OR_RETURN(HostPort bound, server_.Start(listen));
  if (!options_.namenode_address.empty()) {
    NamenodeStub namenode(rpc_, options_.namenode_address);
    ESS_ASSIGN_OR_RETURN(RegisterResponse reg,
                         namenode.Register(bound.ToString(),
                                           options_.capacity_blocks));
    id_ = reg.node;
    {
      std::lock_guard<std::mutex> lock(mu_);
      store_.set_block_size(reg.block_size);
    }
    heartbeat_thread_ = std::thread([this] { HeartbeatLoop(); });
    spdlog::info("datanode {} serving {} ({} blocks)", id_.value,
                 bound.ToString(), options_.capacity_blocks);
  }
  return bound;
}

NodeState Datanode::state() const {
  std::lock_guard<std::mutex> lock(mu_);
  return state_;
}

bool Datanode::WaitUntil(TimePoint t) {
  std::unique_lock<std::mutex> lock(wait_mu_);
  return !wait_cv_.wait_until(lock, t, [&] { return terminated_.load(); });
}

Status Datanode::WriteBlock(const WriteBlockRequest& req) {
  if (Crc32(req.data) != req.crc) {
    return ProtocolError("payload CRC mismatch");
  }
  if (ingress_) {
    TimePoint go = ingress_->Reserve(req.data.size(),
                                     std::chrono::steady_clock::now());
    if (!WaitUntil(go)) return Unavailable("datanode terminated");
  }
  // The state check and the store mutation happen under one lock, so once
  // EnterDraining has taken the lock no later write can land.
  std::lock_guard<std::mutex> lock(mu_);
  if (state_ == NodeState::kDraining) {
    ++counters_.writes_rejected_draining;
    return NodeDraining("datanode is draining; writes are fenced");
  }
  if (state_ == NodeState::kTerminated) return Unavailable("datanode terminated");
  ESS_RETURN_IF_ERROR(store_.Write(req.block, req.offset, req.data, req.crc));
  ++counters_.writes_accepted;
  counters_.bytes_written += req.data.size();
  return Status::Ok();
}

Result<ReadBlockResponse> Datanode::ReadBlock(const ReadBlockRequest& req) {
  StoredBlock block;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (state_ == NodeState::kTerminated) return Unavailable("datanode terminated");
    ESS_ASSIGN_OR_RETURN(block, store_.Get(req.block));
  }
  const std::vector<uint8_t>& data = *block.data;
  if (req.offset > data.size() || req.length > data.size() - req.offset) {
    return ProtocolError("read outside the written extent");
  }
  if (egress_) {
    TimePoint go =
        egress_->Reserve(req.length, std::chrono::steady_clock::now());
    if (!WaitUntil(go)) return Unavailable("datanode terminated");
  }
  ReadBlockResponse resp;
  resp.data.assign(data.begin() + req.offset,
                   data.begin() + req.offset + req.length);
  resp.crc = (req.offset == 0 && req.length == data.size())
                 ? block.crc
                 : Crc32(resp.data);
  std::lock_guard<std::mutex> lock(mu_);
  counters_.bytes_read += req.length;
  return resp;
}

void Datanode::DeleteBlock(BlockId id) {
  std::lock_guard<std::mutex> lock(mu_);
  store_.Delete(id);
}

Status Datanode::EnterDraining(TimePoint deadline) {
  std::lock_guard<std::mutex> lock(mu_);
  if (state_ != NodeState::kActive) {
    return Conflict(std::string("datanode is ") +
                    std::string(NodeStateName(state_)));
  }
  state_ = NodeState::kDraining;
  deadline_ = deadline;
  spdlog::info("datanode {} entered draining", id_.value);
  return Status::Ok();
}

void Datanode::Terminate() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (state_ == NodeState::kTerminated) return;
    state_ = NodeState::kTerminated;
    store_.Clear();
  }
  {
    std::lock_guard<std::mutex> lock(wait_mu_);
    terminated_.store(true);
  }
  wait_cv_.notify_all();
  server_.Shutdown();
  spdlog::info("datanode {} terminated", id_.value);
}

size_t Datanode::block_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return store_.size();
}

uint64_t Datanode::StoreDigest() const {
  std::lock_guard<std::mutex> lock(mu_);
  return store_.Digest();
}

DatanodeCounters Datanode::counters() const {
  std::lock_guard<std::mutex> lock(mu_);
  return counters_;
}

bool Datanode::IsControlPeer(const PeerInfo& peer) const {
  if (peer.loopback) return true;
  std::string host = peer.address.substr(0, peer.address.rfind(':'));
  return std::find(options_.control_peers.begin(), options_.control_peers.end(),
                   host) != options_.control_peers.end();
}

std::optional<Message> Datanode::Handle(const Message& request,
                                        const PeerInfo& peer) {
  auto ack = [](const Status& s) -> Message {
    if (!s.ok()) return MakeErrorResponse(s);
    return Ack{};
  };
  if (const auto* req = std::get_if<WriteBlockRequest>(&request)) {
    return ack(WriteBlock(*req));
  }
  if (const auto* req = std::get_if<ReadBlockRequest>(&request)) {
    auto resp = ReadBlock(*req);
    if (!resp.ok()) {
      if (resp.status().code() == StatusCode::kUnavailable) return std::nullopt;
      return MakeErrorResponse(resp.status());
    }
    return std::move(resp).value();
  }
  if (const auto* req = std::get_if<DeleteBlockRequest>(&request)) {
    DeleteBlock(req->block);
    return Ack{};
  }
  if (std::holds_alternative<EnterDrainingRequest>(request) ||
      std::holds_alternative<TerminateRequest>(request)) {
    if (!IsControlPeer(peer)) {
      return MakeErrorResponse(
          ProtocolError("control message from unauthorized peer"));
    }
    if (const auto* req = std::get_if<EnterDrainingRequest>(&request)) {
      return ack(EnterDraining(FromWireMillis(req->deadline_ms)));
    }
    Terminate();
    return std::nullopt;
  }
  return MakeErrorResponse(ProtocolError(
      std::string("datanode does not serve ") +
      std::string(MessageTypeName(TypeOf(request)))));
}

void Datanode::HeartbeatLoop() {
  NamenodeStub namenode(rpc_, options_.namenode_address);
  while (!terminated_.load()) {
    Status s = namenode.Heartbeat(id_);
    if (s.code() == StatusCode::kConflict) {
      spdlog::warn("namenode considers datanode {} terminated", id_.value);
    }
    WaitUntil(std::chrono::steady_clock::now() + options_.heartbeat_interval);
  }
}

}  // namespace ess
