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

#ifndef ESS_INJECTOR_SCHEDULE_H_
#define ESS_INJECTOR_SCHEDULE_H_

#include <atomic>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ess/common/clock.h"
#include "ess/injector/model.h"
#include "ess/protocol/types.h"

namespace ess {

// The cluster operations a preemption schedule drives.
class ClusterControl {
 public:
  virtual ~ClusterControl() = default;

  // Fences the node and hands its drain to the relocator.
  virtual Status Notice(uint32_t slot, DatanodeId node, TimePoint deadline) = 0;
  // Kills the node and records it as terminated. Must tolerate a node the
  // relocator already marked.
  virtual Status Terminate(uint32_t slot, DatanodeId node) = 0;
  // Starts an empty replacement datanode for `slot`.
  virtual Result<DatanodeId> Respawn(uint32_t slot) = 0;
};

enum class EventKind { kNotice, kTerminate, kRespawn };

std::string_view EventKindName(EventKind kind);

struct PreemptionEvent {
  double time_s = 0;  // scheduled time, seconds since the run started
  uint32_t slot = 0;
  DatanodeId node;
  EventKind kind = EventKind::kNotice;
};

// One JSON object: {"time","slot","node_id","kind"}.
std::string EventToJson(const PreemptionEvent& event);

// Preempts the nodes in `fleet` (one per slot) for `duration`. Each slot draws
// lifetimes from its own generator, so a slot's timeline does not depend on
// the others. Returns the log in execution order. Setting `stop` ends the
// run within about 100 ms.
std::vector<PreemptionEvent> RunSchedule(
    const PreemptionModelParams& params, const std::vector<DatanodeId>& fleet,
    ClusterControl* control, Clock* clock, Duration duration,
    const std::function<void(const PreemptionEvent&)>& on_event = nullptr,
    const std::atomic<bool>* stop = nullptr);

}  // namespace ess

#endif  // ESS_INJECTOR_SCHEDULE_H_
