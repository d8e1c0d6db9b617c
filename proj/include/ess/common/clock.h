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

#ifndef ESS_COMMON_CLOCK_H_
#define ESS_COMMON_CLOCK_H_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <set>

namespace ess {

using Duration = std::chrono::steady_clock::duration;
using TimePoint = std::chrono::steady_clock::time_point;

// Milliseconds since the steady-clock epoch. All processes on one host share
// CLOCK_MONOTONIC, so these values are comparable across services.
int64_t ToWireMillis(TimePoint t);
TimePoint FromWireMillis(int64_t ms);

double ToSeconds(Duration d);
Duration FromSeconds(double seconds);

class Clock {
 public:
  virtual ~Clock() = default;

  virtual TimePoint Now() const = 0;
  virtual void SleepUntil(TimePoint t) = 0;
  void SleepFor(Duration d) { SleepUntil(Now() + d); }

  // Threads that sleep on a simulated clock register themselves so the clock
  // knows when every actor is idle. No-ops for the system clock.
  virtual void AddParticipant() {}
  virtual void RemoveParticipant() {}
};

// Wall time from std::chrono::steady_clock.
class SystemClock final : public Clock {
 public:
  static SystemClock* Get();

  TimePoint Now() const override { return std::chrono::steady_clock::now(); }
  void SleepUntil(TimePoint t) override;
};

// Virtual time for deterministic tests.
//
// Time moves only through Advance()/AdvanceTo(), or automatically: once at
// least one participant is registered, whenever every participant is blocked
// in SleepUntil() the clock jumps to the earliest pending wake-up. A
// participant that blocks on anything other than this clock stalls time.
class SimulatedClock final : public Clock {
 public:
  explicit SimulatedClock(TimePoint start = TimePoint(std::chrono::hours(1)));

  TimePoint Now() const override;
  void SleepUntil(TimePoint t) override;
  void AddParticipant() override;
  void RemoveParticipant() override;

  void AdvanceTo(TimePoint t);
  void Advance(Duration d);

 private:
  void MaybeAutoAdvanceLocked();

  mutable std::mutex mu_;
  std::condition_variable cv_;
  TimePoint now_;
  int participants_ = 0;
  int sleeping_ = 0;
  std::multiset<TimePoint> wakeups_;
};

// RAII registration with Clock::AddParticipant/RemoveParticipant.
class ClockParticipant {
 public:
  explicit ClockParticipant(Clock* clock) : clock_(clock) {
    clock_->AddParticipant();
  }
  // Adopts a registration made earlier by another thread.
  struct Adopt {};
  ClockParticipant(Clock* clock, Adopt) : clock_(clock) {}
  ClockParticipant(ClockParticipant&& other) noexcept : clock_(other.clock_) {
    other.clock_ = nullptr;
  }
  ClockParticipant(const ClockParticipant&) = delete;
  ClockParticipant& operator=(const ClockParticipant&) = delete;
  ClockParticipant& operator=(ClockParticipant&&) = delete;
  ~ClockParticipant() {
    if (clock_ != nullptr) clock_->RemoveParticipant();
  }

 private:
  Clock* clock_;
};

}  // namespace ess

#endif  // ESS_COMMON_CLOCK_H_
