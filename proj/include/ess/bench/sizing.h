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

#ifndef ESS_BENCH_SIZING_H_
#define ESS_BENCH_SIZING_H_

#include <string_view>

#include "ess/common/status.h"

namespace ess {

struct SizingInput {
  double memory_bytes = 0;
  double egress_bits_per_sec = 0;
  double notice_period_s = 0;
};

// Seconds to push the whole memory out at full egress bandwidth.
double SizingTime(const SizingInput& in);
bool SizingFeasible(const SizingInput& in);
// Largest memory that can be drained within the notice period.
double MaxCapacityBytes(double egress_bits_per_sec, double notice_period_s);

// "64GB", "512MiB", "1024" (bytes). Decimal prefixes are powers of 1000.
Result<double> ParseBytes(std::string_view text);
// "32Gbit", "32Gbit/s", "100Mbps", "1e9" (bits per second).
Result<double> ParseBitsPerSecond(std::string_view text);
// "30s", "500ms", "2min", "1h", "30" (seconds).
Result<double> ParseSeconds(std::string_view text);

}  // namespace ess

#endif  // ESS_BENCH_SIZING_H_
