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

#include "ess/namenode/namenode_service.h"

#include <spdlog/spdlog.h>

namespace ess {
namespace {

template <typename T>
Message Reply(Result<T> result, auto&& wrap) {
  if (!result.ok()) return MakeErrorResponse(result.status());
  return wrap(std::move(result).value());
}

Message ReplyAck(const Status& status) {
  if (!status.ok()) return MakeErrorResponse(status);
  return Ack{};
}

}  // namespace

NamenodeService::NamenodeService(NamenodeConfig config, Clock* clock)
    : namenode_(std::move(config), clock),
      server_([this](const Message& m, const PeerInfo&) {
        return std::optional<Message>(Handle(m));
      }),
      datanodes_(std::make_shared<RpcClient>()) {}

NamenodeService::~NamenodeService() { Stop(); }

Result<HostPort> NamenodeService::Start(const HostPort& listen) {
  ESS_ASSIGN_OR_RETURN(HostPort bound, server_.Start(listen));
  reaper_thread_ = std::thread([this] { ReaperLoop(); });
  spdlog::info("namenode listening on {}", bound.ToString());
  return bound;
}

void NamenodeService::Stop() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (stopping_) return;
    stopping_ = true;
  }
  cv_.notify_all();
  server_.Shutdown();
  if (reaper_thread_.joinable()) reaper_thread_.join();
}

Message NamenodeService::Handle(const Message& request) {
  Namenode& nn = namenode_;
  auto meta = [](ObjectMetadata m) -> Message {
    return ObjectMetadataResponse{std::move(m)};
  };
  return std::visit(
      [&](const auto& req) -> Message {
        using T = std::decay_t<decltype(req)>;
        if constexpr (std::is_same_v<T, RegisterRequest>) {
          if (req.protocol_version != kProtocolVersion) {
            return MakeErrorResponse(ProtocolError("unsupported protocol version"));
          }
          auto id = nn.RegisterDatanode(req.address, req.capacity_blocks);
          if (id.ok()) {
            spdlog::info("registered datanode {} at {} ({} blocks)",
                         id->value, req.address, req.capacity_blocks);
          }
          return Reply(std::move(id), [&](DatanodeId n) -> Message {
            return RegisterResponse{n, nn.block_size()};
          });
        } else if constexpr (std::is_same_v<T, HeartbeatRequest>) {
          return ReplyAck(nn.Heartbeat(req.node));
        } else if constexpr (std::is_same_v<T, CreateObjectRequest>) {
          return Reply(nn.CreateObject(req.name, req.size), meta);
        } else if constexpr (std::is_same_v<T, SealObjectRequest>) {
          return Reply(nn.SealObject(req.name), meta);
        } else if constexpr (std::is_same_v<T, GetMetadataRequest>) {
          return Reply(nn.GetMetadata(req.name), meta);
        } else if constexpr (std::is_same_v<T, AllocateBlockRequest>) {
          auto desc = [](BlockDescriptor b) -> Message {
            return BlockDescriptorResponse{std::move(b)};
          };
          if (req.relocate_block.value != 0) {
            return Reply(
                nn.ReserveRelocationTarget(req.relocate_block, req.exclude),
                desc);
          }
          std::vector<BlockDeletion> deletions;
          auto result =
              nn.AllocateBlock(req.name, req.index, req.exclude, &deletions);
          IssueDeletions(deletions);
          return Reply(std::move(result), desc);
        } else if constexpr (std::is_same_v<T, CommitRelocationRequest>) {
          return Reply(
              nn.CommitRelocation(req.block, req.new_node, req.expected_version),
              [](uint64_t v) -> Message { return CommitRelocationResponse{v}; });
        } else if constexpr (std::is_same_v<T, ListBlocksOnNodeRequest>) {
          return Reply(nn.ListBlocksOnNode(req.node),
                       [](std::vector<NodeBlock> b) -> Message {
                         return BlockListResponse{std::move(b)};
                       });
        } else if constexpr (std::is_same_v<T, BeginDrainRequest>) {
          Status s = nn.BeginDrain(req.node, FromWireMillis(req.deadline_ms));
          if (s.ok()) spdlog::info("datanode {} draining", req.node.value);
          return ReplyAck(s);
        } else if constexpr (std::is_same_v<T, MarkLostRequest>) {
          auto lost = nn.MarkNodeTerminated(req.node);
          if (lost.ok()) {
            spdlog::info("datanode {} terminated, {} blocks lost",
                         req.node.value, *lost);
          }
          return Reply(std::move(lost), [](uint64_t n) -> Message {
            return LostReportResponse{n};
          });
        } else if constexpr (std::is_same_v<T, DeleteObjectRequest>) {
          std::vector<BlockDeletion> deletions;
          Status s = nn.DeleteObject(req.name, req.expected_version, &deletions);
          IssueDeletions(deletions);
          return ReplyAck(s);
        } else if constexpr (std::is_same_v<T, ClusterStatusRequest>) {
          return ClusterStatusResponse{nn.block_size(), nn.ClusterStatus()};
        } else {
          return MakeErrorResponse(ProtocolError(
              std::string("namenode does not serve ") +
              std::string(MessageTypeName(T::kType))));
        }
      },
      request);
}

void NamenodeService::IssueDeletions(
    const std::vector<BlockDeletion>& deletions) {
  for (const auto& d : deletions) {
    Status s = datanodes_.DeleteBlock(
        d.address, d.block,
        std::chrono::steady_clock::now() + std::chrono::seconds(1));
    if (!s.ok()) {
      spdlog::debug("delete of block {} on {} failed: {}", d.block.value,
                    d.address, s.ToString());
    }
  }
}

void NamenodeService::ReaperLoop() {
  const Duration period = std::min<Duration>(
      namenode_.config().heartbeat_timeout / 4, std::chrono::milliseconds(250));
  std::unique_lock<std::mutex> lock(mu_);
  while (!cv_.wait_for(lock, period, [&] { return stopping_; })) {
    lock.unlock();
    for (auto [node, lost] : namenode_.ReapExpired()) {
      spdlog::warn("datanode {} missed heartbeats, terminated with {} lost blocks",
                   node.value, lost);
    }
    lock.lock();
  }
}

}  // namespace ess
