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

#ifndef ESS_RELOCATOR_SCHEDULER_H_
#define ESS_RELOCATOR_SCHEDULER_H_

#include <functional>
#include <string>
#include <vector>

#include "ess/common/clock.h"
#include "ess/common/status.h"
#include "ess/protocol/types.h"

namespace ess {

struct RelocationTask {
  std::string object;
  BlockDescriptor block;
  DatanodeId source;
  uint32_t attempt = 0;
};

enum class TransferResult { kMoved, kLost, kSkipped };

struct TransferOutcome {
  TransferResult result = TransferResult::kLost;
  Status reason;  // why the block was lost or skipped
  uint64_t bytes = 0;

  static TransferOutcome Moved(uint64_t bytes) {
    return {TransferResult::kMoved, Status::Ok(), bytes};
  }
  static TransferOutcome Lost(Status why) {
    return {TransferResult::kLost, std::move(why), 0};
  }
  static TransferOutcome Skipped(Status why) {
    return {TransferResult::kSkipped, std::move(why), 0};
  }
};

using TransferFn =
    std::function<TransferOutcome(RelocationTask& task, TimePoint deadline)>;

struct ScheduleResult {
  std::vector<RelocationTask> order;     // issue order
  std::vector<TransferOutcome> outcomes; // parallel to `order`
  TimePoint finished;
};

// Runs `transfer` over the tasks, largest block first, on `parallelism`
// workers. Nothing starts at or after the deadline, and a transfer that
// completes after it counts as lost.
ScheduleResult Schedule(std::vector<RelocationTask> tasks, TimePoint deadline,
                        int parallelism, Clock* clock,
                        const TransferFn& transfer);

}  // namespace ess

#endif  // ESS_RELOCATOR_SCHEDULER_H_
