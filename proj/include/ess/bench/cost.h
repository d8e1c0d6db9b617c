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

#ifndef ESS_BENCH_COST_H_
#define ESS_BENCH_COST_H_

#include <string>
#include <string_view>

#include "ess/common/status.h"

namespace ess {

struct CostInputs {
  double n_on_demand = 1;
  double n_spot = 4;
  double price_on_demand = 0.776944;  // per instance-hour
  double price_spot = 0.188320;
  double baseline_hours = 1;
  double spot_run_hours = 1;
};

struct CostResult {
  double baseline_cost = 0;  // every instance on demand for baseline_hours
  double spot_cost = 0;
  double savings_fraction = 0;
};

Status ValidateCostInputs(const CostInputs& in);
CostResult CostModel(const CostInputs& in);

Result<CostInputs> ParseCostInputs(std::string_view json);
std::string CostResultToJson(const CostInputs& in, const CostResult& out);

}  // namespace ess

#endif  // ESS_BENCH_COST_H_
