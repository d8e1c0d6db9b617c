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

#include "ess/common/token_bucket.h"

#include <algorithm>
#include <cassert>

namespace ess {

TokenBucket::TokenBucket(double bytes_per_sec, double burst_bytes)
    : rate_(bytes_per_sec),
      burst_(burst_bytes > 0 ? burst_bytes : bytes_per_sec / 100.0) {
  assert(rate_ > 0);
}

TimePoint TokenBucket::Reserve(uint64_t bytes, TimePoint now) {
  std::lock_guard<std::mutex> lock(mu_);
  drained_at_ = std::max(drained_at_, now) +
                FromSeconds(static_cast<double>(bytes) / rate_);
  return std::max(now, drained_at_ - FromSeconds(burst_ / rate_));
}

}  // namespace ess
