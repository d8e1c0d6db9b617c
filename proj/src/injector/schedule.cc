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

#include "ess/injector/schedule.h"

#include <optional>
#include <queue>
#include <random>
#include <tuple>

#include <spdlog/spdlog.h>

#include "json.hpp"

namespace ess {

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kNotice:
      return "notice";
    case EventKind::kTerminate:
      return "terminate";
    case EventKind::kRespawn:
      return "respawn";
  }
  return "unknown";
}

std::string EventToJson(const PreemptionEvent& e) {
  nlohmann::ordered_json j;
  j["time"] = e.time_s;
  j["slot"] = e.slot;
  j["node_id"] = e.node.value;
  j["kind"] = EventKindName(e.kind);
  return j.dump();
}

namespace {

struct Pending {
  TimePoint at;
  uint32_t slot;
  uint64_t seq;
  EventKind kind;

  bool operator>(const Pending& o) const {
    return std::tie(at, slot, seq) > std::tie(o.at, o.slot, o.seq);
  }
};

struct Slot {
  DatanodeId node;
  std::mt19937_64 rng;
  std::vector<double> trace_times;
  size_t trace_pos = 0;
};

}  // namespace

std::vector<PreemptionEvent> RunSchedule(
    const PreemptionModelParams& params, const std::vector<DatanodeId>& fleet,
    ClusterControl* control, Clock* clock, Duration duration,
    const std::function<void(const PreemptionEvent&)>& on_event,
    const std::atomic<bool>* stop) {
  ClockParticipant participant(clock);
  const TimePoint start = clock->Now();
  const TimePoint end = start + duration;
  const Duration notice = FromSeconds(params.notice_period_s);
  const auto* trace = std::get_if<TraceModel>(&params.distribution);

  std::vector<Slot> slots(fleet.size());
  for (uint32_t i = 0; i < slots.size(); ++i) {
    std::seed_seq seq{static_cast<uint32_t>(params.seed),
                      static_cast<uint32_t>(params.seed >> 32), i};
    slots[i].node = fleet[i];
    slots[i].rng.seed(seq);
  }
  if (trace != nullptr) {
    for (const auto& e : trace->entries) {
      if (e.slot < slots.size()) slots[e.slot].trace_times.push_back(e.preemption_time_s);
    }
  }

  auto next_notice = [&](Slot& s, TimePoint now) -> std::optional<TimePoint> {
    if (trace == nullptr) {
      return now + FromSeconds(DrawLifetime(params.distribution, s.rng));
    }
    if (s.trace_pos >= s.trace_times.size()) return std::nullopt;
    return std::max(now, start + FromSeconds(s.trace_times[s.trace_pos++]));
  };

  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue;
  uint64_t seq = 0;
  auto push = [&](TimePoint at, uint32_t slot, EventKind kind) {
    queue.push({at, slot, seq++, kind});
  };
  for (uint32_t i = 0; i < slots.size(); ++i) {
    if (auto at = next_notice(slots[i], start)) push(*at, i, EventKind::kNotice);
  }

  std::vector<PreemptionEvent> log;
  auto record = [&](const Pending& p, DatanodeId node, EventKind kind) {
    PreemptionEvent e{ToSeconds(p.at - start), p.slot, node, kind};
    log.push_back(e);
    if (on_event) on_event(e);
  };

  while (!queue.empty() && queue.top().at <= end) {
    Pending p = queue.top();
    queue.pop();
    if (stop == nullptr) {
      clock->SleepUntil(p.at);
    } else {
      while (!stop->load() && clock->Now() < p.at) {
        clock->SleepUntil(std::min(p.at, clock->Now() + std::chrono::milliseconds(100)));
      }
      if (stop->load()) break;
    }
    Slot& s = slots[p.slot];
    EventKind kind = p.kind;
    if (kind == EventKind::kNotice && notice == Duration::zero()) {
      kind = EventKind::kTerminate;
    }
    switch (kind) {
      case EventKind::kNotice: {
        Status st = control->Notice(p.slot, s.node, p.at + notice);
        if (!st.ok()) {
          spdlog::warn("notice for datanode {} failed: {}", s.node.value,
                       st.ToString());
        }
        record(p, s.node, kind);
        push(p.at + notice, p.slot, EventKind::kTerminate);
        break;
      }
      case EventKind::kTerminate: {
        Status st = control->Terminate(p.slot, s.node);
        if (!st.ok()) {
          spdlog::warn("terminating datanode {} failed: {}", s.node.value,
                       st.ToString());
        }
        record(p, s.node, kind);
        if (params.respawn_delay_s) {
          push(p.at + FromSeconds(*params.respawn_delay_s), p.slot,
               EventKind::kRespawn);
        }
        break;
      }
      case EventKind::kRespawn: {
        auto node = control->Respawn(p.slot);
        if (!node.ok()) {
          spdlog::warn("respawn in slot {} failed: {}", p.slot,
                       node.status().ToString());
          break;
        }
        s.node = node.value();
        record(p, s.node, kind);
        if (auto at = next_notice(s, p.at)) push(*at, p.slot, EventKind::kNotice);
        break;
      }
    }
  }
  return log;
}

}  // namespace ess
