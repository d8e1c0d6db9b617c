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

#include "ess/relocator/relocator.h"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "ess/common/crc.h"
#include "json.hpp"

namespace ess {

std::string ReportToJson(const RelocationReport& r) {
  nlohmann::json j = {
      {"node", r.node.value},
      {"blocks_total", r.blocks_total},
      {"blocks_moved", r.blocks_moved},
      {"blocks_lost", r.blocks_lost},
      {"blocks_skipped", r.blocks_skipped},
      {"bytes_moved", r.bytes_moved},
      {"elapsed", r.elapsed_seconds},
      {"deadline_met", r.deadline_met},
  };
  return j.dump();
}

Relocator::Relocator(RelocatorOptions options, std::shared_ptr<RpcClient> rpc,
                     Clock* clock)
    : options_(std::move(options)),
      rpc_(rpc ? std::move(rpc) : std::make_shared<RpcClient>()),
      clock_(clock),
      namenode_(rpc_, options_.namenode_address),
      datanodes_(rpc_),
      server_([this](const Message& m, const PeerInfo&) -> std::optional<Message> {
        const auto* notice = std::get_if<PreemptionNotice>(&m);
        if (notice == nullptr) {
          return MakeErrorResponse(
              ProtocolError("relocator only accepts preemption notices"));
        }
        Status s = Notify(notice->node, FromWireMillis(notice->deadline_ms));
        if (!s.ok()) return MakeErrorResponse(s);
        return Ack{};
      }) {}

Relocator::~Relocator() {
  Stop();
  std::map<DatanodeId, Drain> drains;
  {
    std::lock_guard<std::mutex> lock(mu_);
    drains.swap(drains_);
  }
  for (auto& [node, drain] : drains) {
    if (drain.thread.joinable()) drain.thread.join();
  }
}

Result<HostPort> Relocator::Start(const HostPort& listen) {
  return server_.Start(listen);
}

void Relocator::Stop() {
  server_.Shutdown();
  {
    std::lock_guard<std::mutex> lock(mu_);
    stopping_ = true;
  }
  stop_cv_.notify_all();
}

void Relocator::SetReportCallback(
    std::function<void(const RelocationReport&)> cb) {
  std::lock_guard<std::mutex> lock(mu_);
  report_cb_ = std::move(cb);
}

std::shared_future<RelocationReport> Relocator::GetOrStartDrain(
    DatanodeId node, TimePoint deadline, bool* created) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = drains_.find(node);
  if (it != drains_.end()) {
    *created = false;
    return it->second.report;
  }
  *created = true;
  auto promise = std::make_shared<std::promise<RelocationReport>>();
  Drain& drain = drains_[node];
  drain.report = promise->get_future().share();
  drain.thread = std::thread([this, node, deadline, promise] {
    RelocationReport report = RunDrain(node, deadline);
    std::function<void(const RelocationReport&)> cb;
    {
      std::lock_guard<std::mutex> lock(mu_);
      cb = report_cb_;
    }
    if (cb) cb(report);
    promise->set_value(report);
  });
  return drain.report;
}

RelocationReport Relocator::HandleNotice(DatanodeId node, TimePoint deadline) {
  bool created = false;
  return GetOrStartDrain(node, deadline, &created).get();
}

Status Relocator::Notify(DatanodeId node, TimePoint deadline) {
  bool created = false;
  GetOrStartDrain(node, deadline, &created);
  if (!created) {
    return Conflict("datanode " + std::to_string(node.value) +
                    " is already draining");
  }
  return Status::Ok();
}

std::optional<RelocationReport> Relocator::WaitForReport(DatanodeId node,
                                                         Duration timeout) {
  std::shared_future<RelocationReport> f;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = drains_.find(node);
    if (it == drains_.end()) return std::nullopt;
    f = it->second.report;
  }
  if (f.wait_for(timeout) != std::future_status::ready) return std::nullopt;
  return f.get();
}

void Relocator::TerminateAtDeadline(DatanodeId node, TimePoint deadline) {
  {
    std::unique_lock<std::mutex> lock(mu_);
    if (stop_cv_.wait_until(lock, deadline, [&] { return stopping_; })) return;
  }
  auto lost = namenode_.MarkNodeTerminated(node);
  if (lost.ok()) {
    spdlog::info("datanode {} terminated at deadline, {} blocks lost",
                 node.value, lost.value());
  } else if (lost.status().code() != StatusCode::kConflict) {
    spdlog::warn("marking datanode {} terminated failed: {}", node.value,
                 lost.status().ToString());
  }
}

RelocationReport Relocator::RunDrain(DatanodeId node, TimePoint deadline) {
  TimePoint start = clock_->Now();
  RelocationReport report;
  report.node = node;

  Status begun = namenode_.BeginDrain(node, deadline);
  if (!begun.ok() && begun.code() != StatusCode::kConflict) {
    spdlog::warn("begin drain of datanode {} failed: {}", node.value,
                 begun.ToString());
  }
  std::thread timer([this, node, deadline] { TerminateAtDeadline(node, deadline); });

  // Fence the node itself before enumerating, so the listing cannot miss a
  // block written after it.
  if (auto status = namenode_.ClusterStatus(); status.ok()) {
    for (const auto& info : status.value().nodes) {
      if (info.id != node) continue;
      Status fenced = datanodes_.EnterDraining(info.address, deadline);
      if (!fenced.ok() && fenced.code() != StatusCode::kConflict) {
        spdlog::warn("fencing datanode {} failed: {}", node.value,
                     fenced.ToString());
      }
    }
  }

  std::vector<RelocationTask> tasks;
  if (auto listed = namenode_.ListBlocksOnNode(node); listed.ok()) {
    for (auto& nb : listed.value()) {
      tasks.push_back({std::move(nb.object), nb.block, node, 0});
    }
  } else {
    spdlog::warn("listing blocks of datanode {} failed: {}", node.value,
                 listed.status().ToString());
  }
  spdlog::info("draining datanode {}: {} blocks, {:.1f}s until deadline",
               node.value, tasks.size(), ToSeconds(deadline - start));

  ScheduleResult result = Schedule(
      std::move(tasks), deadline, options_.parallelism, clock_,
      [this](RelocationTask& t, TimePoint d) { return RelocateBlock(t, d); });

  report.blocks_total = result.order.size();
  for (const auto& out : result.outcomes) {
    switch (out.result) {
      case TransferResult::kMoved:
        ++report.blocks_moved;
        report.bytes_moved += out.bytes;
        break;
      case TransferResult::kLost:
        ++report.blocks_lost;
        break;
      case TransferResult::kSkipped:
        ++report.blocks_skipped;
        break;
    }
  }
  report.elapsed_seconds = ToSeconds(result.finished - start);
  report.deadline_met = report.blocks_lost == 0 && result.finished <= deadline;
  timer.join();
  spdlog::info("drain of datanode {} done: {}", node.value, ReportToJson(report));
  return report;
}

Result<uint64_t> Relocator::CommitWithRetry(RelocationTask& task,
                                            DatanodeId target) {
  auto committed =
      namenode_.CommitRelocation(task.block.block_id, target, task.block.version);
  if (committed.ok() || committed.status().code() != StatusCode::kStaleLocation) {
    return committed;
  }
  ESS_ASSIGN_OR_RETURN(ObjectMetadata meta, namenode_.GetMetadata(task.object));
  auto it = std::find_if(meta.blocks.begin(), meta.blocks.end(),
                         [&](const BlockDescriptor& b) {
                           return b.block_id == task.block.block_id;
                         });
  if (it == meta.blocks.end()) return NotFound("block no longer in object");
  if (it->lost()) return Conflict("block is lost");
  if (it->datanode != task.source) {
    return StaleLocation("block has already left the draining node");
  }
  task.block.version = it->version;
  return namenode_.CommitRelocation(task.block.block_id, target,
                                    task.block.version);
}

void Relocator::DiscardCopy(const std::string& address, BlockId block) {
  Status s = datanodes_.DeleteBlock(
      address, block, std::chrono::steady_clock::now() + std::chrono::seconds(1));
  if (!s.ok()) {
    spdlog::debug("discarding uncommitted copy of block {} on {} failed: {}",
                  block.value, address, s.ToString());
  }
}

TransferOutcome Relocator::RelocateBlock(RelocationTask& task,
                                         TimePoint deadline) {
  const BlockId id = task.block.block_id;
  auto read = datanodes_.ReadBlock(task.block.address, id, 0,
                                   task.block.length, deadline);
  if (!read.ok()) {
    if (read.status().code() == StatusCode::kNotFound) {
      return TransferOutcome::Skipped(read.status());
    }
    return TransferOutcome::Lost(read.status());
  }
  std::vector<uint8_t> data = std::move(read.value().data);
  const uint32_t crc = read.value().crc;
  if (Crc32(data) != crc) {
    return TransferOutcome::Lost(ProtocolError("source block failed CRC check"));
  }

  std::vector<DatanodeId> exclude{task.source};
  while (task.attempt < options_.max_attempts) {
    ++task.attempt;
    auto target = namenode_.ReserveRelocationTarget(task.object, id, exclude);
    if (!target.ok()) {
      if (target.status().code() == StatusCode::kNotFound) {
        return TransferOutcome::Skipped(target.status());
      }
      return TransferOutcome::Lost(target.status());
    }
    const BlockDescriptor& dest = target.value();
    if (clock_->Now() >= deadline) {
      return TransferOutcome::Lost(DeadlineExceeded("deadline before write"));
    }
    Status wrote =
        datanodes_.WriteBlock(dest.address, id, 0, data, crc, deadline);
    if (wrote.code() == StatusCode::kNodeDraining ||
        wrote.code() == StatusCode::kUnavailable) {
      exclude.push_back(dest.datanode);
      continue;
    }
    if (!wrote.ok()) return TransferOutcome::Lost(wrote);
    if (clock_->Now() >= deadline) {
      DiscardCopy(dest.address, id);
      return TransferOutcome::Lost(DeadlineExceeded("deadline before commit"));
    }
    auto committed = CommitWithRetry(task, dest.datanode);
    if (!committed.ok()) {
      DiscardCopy(dest.address, id);
      if (committed.status().code() == StatusCode::kNotFound) {
        return TransferOutcome::Skipped(committed.status());
      }
      return TransferOutcome::Lost(committed.status());
    }
    return TransferOutcome::Moved(data.size());
  }
  return TransferOutcome::Lost(
      CapacityExhausted("no reachable active destination"));
}

}  // namespace ess
