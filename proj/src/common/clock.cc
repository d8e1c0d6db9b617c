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

#include "ess/common/clock.h"

#include <thread>

namespace ess {

int64_t ToWireMillis(TimePoint t) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             t.time_since_epoch())
      .count();
}

TimePoint FromWireMillis(int64_t ms) {
  return TimePoint(std::chrono::milliseconds(ms));
}

double ToSeconds(Duration d) {
  return std::chrono::duration<double>(d).count();
}

Duration FromSeconds(double seconds) {
  return std::chrono::duration_cast<Duration>(
      std::chrono::duration<double>(seconds));
}

SystemClock* SystemClock::Get() {
  static SystemClock clock;
  return &clock;
}

void SystemClock::SleepUntil(TimePoint t) { std::this_thread::sleep_until(t); }

SimulatedClock::SimulatedClock(TimePoint start) : now_(start) {}

TimePoint SimulatedClock::Now() const {
  std::lock_guard<std::mutex> lock(mu_);
  return now_;
}

void SimulatedClock::SleepUntil(TimePoint t) {
  std::unique_lock<std::mutex> lock(mu_);
  if (t <= now_) return;
  auto it = wakeups_.insert(t);
  ++sleeping_;
  MaybeAutoAdvanceLocked();
  cv_.wait(lock, [&] { return now_ >= t; });
  --sleeping_;
  wakeups_.erase(it);
}

void SimulatedClock::AddParticipant() {
  std::lock_guard<std::mutex> lock(mu_);
  ++participants_;
}

void SimulatedClock::RemoveParticipant() {
  std::lock_guard<std::mutex> lock(mu_);
  --participants_;
  MaybeAutoAdvanceLocked();
}

void SimulatedClock::AdvanceTo(TimePoint t) {
  std::lock_guard<std::mutex> lock(mu_);
  if (t > now_) now_ = t;
  cv_.notify_all();
}

void SimulatedClock::Advance(Duration d) {
  std::lock_guard<std::mutex> lock(mu_);
  now_ += d;
  cv_.notify_all();
}

void SimulatedClock::MaybeAutoAdvanceLocked() {
  if (participants_ <= 0 || sleeping_ < participants_) return;
  // Sleepers whose wake-up already passed are about to run; time must not
  // move until they do.
  if (wakeups_.empty() || *wakeups_.begin() <= now_) return;
  now_ = *wakeups_.begin();
  cv_.notify_all();
}

}  // namespace ess
