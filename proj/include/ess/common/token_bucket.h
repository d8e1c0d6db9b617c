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

#ifndef ESS_COMMON_TOKEN_BUCKET_H_
#define ESS_COMMON_TOKEN_BUCKET_H_

#include <cstdint>
#include <mutex>

#include "ess/common/clock.h"

namespace ess {

// Byte-rate limiter in virtual-scheduling form. Every reservation is appended
// to one FIFO timeline draining at `bytes_per_sec`; a caller may start its
// transfer once the backlog ahead of it has drained to within `burst_bytes`.
// Concurrent callers share the budget in arrival order.
class TokenBucket {
 public:
  // A zero burst defaults to 10 ms worth of tokens.
  explicit TokenBucket(double bytes_per_sec, double burst_bytes = 0);

  // Enqueues `bytes` and returns the earliest time the caller may proceed.
  TimePoint Reserve(uint64_t bytes, TimePoint now);

  double rate() const { return rate_; }
  double burst() const { return burst_; }

 private:
  const double rate_;
  const double burst_;
  std::mutex mu_;
  TimePoint drained_at_{};
};

}  // namespace ess

#endif  // ESS_COMMON_TOKEN_BUCKET_H_
