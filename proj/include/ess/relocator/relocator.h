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

#ifndef ESS_RELOCATOR_RELOCATOR_H_
#define ESS_RELOCATOR_RELOCATOR_H_

#include <condition_variable>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ess/protocol/rpc.h"
#include "ess/protocol/stubs.h"
#include "ess/relocator/scheduler.h"

namespace ess {

struct RelocationReport {
  DatanodeId node;
  uint64_t blocks_total = 0;
  uint64_t blocks_moved = 0;
  uint64_t blocks_lost = 0;
  uint64_t blocks_skipped = 0;
  uint64_t bytes_moved = 0;
  double elapsed_seconds = 0;
  bool deadline_met = false;
};

std::string ReportToJson(const RelocationReport& report);

struct RelocatorOptions {
  std::string namenode_address;
  int parallelism = 4;
  // Destinations tried per block after a draining or unreachable target.
  uint32_t max_attempts = 3;
};

class Relocator {
 public:
  explicit Relocator(RelocatorOptions options,
                     std::shared_ptr<RpcClient> rpc = nullptr,
                     Clock* clock = SystemClock::Get());
  ~Relocator();

  Relocator(const Relocator&) = delete;
  Relocator& operator=(const Relocator&) = delete;

  // Drains `node` and returns once it has been marked terminated. A repeated
  // notice for the same node returns the report of the first one.
  RelocationReport HandleNotice(DatanodeId node, TimePoint deadline);

  // Starts a drain in the background. Conflict if `node` already has one.
  Status Notify(DatanodeId node, TimePoint deadline);

  std::optional<RelocationReport> WaitForReport(DatanodeId node,
                                                Duration timeout);

  // Invoked once per finished drain, from the drain's thread.
  void SetReportCallback(std::function<void(const RelocationReport&)> cb);

  // Copies one block off its draining source and commits the new location.
  TransferOutcome RelocateBlock(RelocationTask& task, TimePoint deadline);

  // Serves PreemptionNotice on `listen`.
  Result<HostPort> Start(const HostPort& listen);
  // Stops serving and cuts pending deadline waits short.
  void Stop();

 private:
  struct Drain {
    std::shared_future<RelocationReport> report;
    std::thread thread;
  };

  // Returns the drain for `node`, creating it when absent. `created` tells
  // which happened.
  std::shared_future<RelocationReport> GetOrStartDrain(DatanodeId node,
                                                       TimePoint deadline,
                                                       bool* created);
  RelocationReport RunDrain(DatanodeId node, TimePoint deadline);
  // Waits for the deadline, then marks the node terminated.
  void TerminateAtDeadline(DatanodeId node, TimePoint deadline);
  Result<uint64_t> CommitWithRetry(RelocationTask& task, DatanodeId target);
  // Best-effort removal of a copy that was written but never committed.
  void DiscardCopy(const std::string& address, BlockId block);

  const RelocatorOptions options_;
  std::shared_ptr<RpcClient> rpc_;
  Clock* const clock_;
  NamenodeStub namenode_;
  DatanodeStub datanodes_;
  RpcServer server_;

  std::mutex mu_;
  std::condition_variable stop_cv_;
  bool stopping_ = false;
  std::map<DatanodeId, Drain> drains_;
  std::function<void(const RelocationReport&)> report_cb_;
};

}  // namespace ess

#endif  // ESS_RELOCATOR_RELOCATOR_H_
