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

#include "ess/relocator/scheduler.h"

#include <algorithm>
#include <atomic>
#include <thread>

namespace ess {

ScheduleResult Schedule(std::vector<RelocationTask> tasks, TimePoint deadline,
                        int parallelism, Clock* clock,
                        const TransferFn& transfer) {
  std::stable_sort(tasks.begin(), tasks.end(),
                   [](const RelocationTask& a, const RelocationTask& b) {
                     return a.block.length > b.block.length;
                   });
  ScheduleResult result;
  result.outcomes.resize(tasks.size());
  std::atomic<size_t> next{0};

  auto worker = [&] {
    ClockParticipant participant(clock, ClockParticipant::Adopt{});
    for (size_t i = next++; i < tasks.size(); i = next++) {
      if (clock->Now() >= deadline) {
        result.outcomes[i] =
            TransferOutcome::Lost(DeadlineExceeded("not started before deadline"));
        continue;
      }
      TransferOutcome out = transfer(tasks[i], deadline);
      if (out.result == TransferResult::kMoved && clock->Now() > deadline) {
        out = TransferOutcome::Lost(
            DeadlineExceeded("transfer still in flight at deadline"));
      }
      result.outcomes[i] = std::move(out);
    }
  };

  size_t workers = std::min<size_t>(std::max(parallelism, 1), tasks.size());
  // Register everyone before any worker runs so simulated time cannot move
  // while the pool is still starting.
  for (size_t i = 0; i < workers; ++i) clock->AddParticipant();
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (size_t i = 0; i < workers; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  result.order = std::move(tasks);
  result.finished = clock->Now();
  return result;
}

}  // namespace ess
