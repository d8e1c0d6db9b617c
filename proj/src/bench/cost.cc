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

#include "ess/bench/cost.h"

#include "json.hpp"

namespace ess {

Status ValidateCostInputs(const CostInputs& in) {
  if (!(in.n_on_demand >= 0 && in.n_spot >= 0)) {
    return InvalidArgument("instance counts must be >= 0");
  }
  if (!(in.n_on_demand + in.n_spot > 0)) return InvalidArgument("no instances");
  if (!(in.price_on_demand >= 0 && in.price_spot >= 0)) {
    return InvalidArgument("prices must be >= 0");
  }
  if (!(in.baseline_hours > 0 && in.spot_run_hours > 0)) {
    return InvalidArgument("hours must be > 0");
  }
  return Status::Ok();
}

CostResult CostModel(const CostInputs& in) {
  CostResult r;
  r.baseline_cost =
      (in.n_on_demand + in.n_spot) * in.price_on_demand * in.baseline_hours;
  r.spot_cost = (in.n_on_demand * in.price_on_demand + in.n_spot * in.price_spot) *
                in.spot_run_hours;
  r.savings_fraction =
      r.baseline_cost > 0 ? 1 - r.spot_cost / r.baseline_cost : 0;
  return r;
}

Result<CostInputs> ParseCostInputs(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    CostInputs in;
    in.n_on_demand = j.value("n_on_demand", in.n_on_demand);
    in.n_spot = j.value("n_spot", in.n_spot);
    in.price_on_demand = j.value("price_on_demand", in.price_on_demand);
    in.price_spot = j.value("price_spot", in.price_spot);
    in.baseline_hours = j.value("baseline_hours", in.baseline_hours);
    in.spot_run_hours = j.value("spot_run_hours", in.spot_run_hours);
    ESS_RETURN_IF_ERROR(ValidateCostInputs(in));
    return in;
  } catch (const nlohmann::json::exception& e) {
    return InvalidArgument(std::string("cost inputs: ") + e.what());
  }
}

std::string CostResultToJson(const CostInputs& in, const CostResult& out) {
  nlohmann::ordered_json j;
  j["n_on_demand"] = in.n_on_demand;
  j["n_spot"] = in.n_spot;
  j["price_on_demand"] = in.price_on_demand;
  j["price_spot"] = in.price_spot;
  j["baseline_hours"] = in.baseline_hours;
  j["spot_run_hours"] = in.spot_run_hours;
  j["baseline_cost"] = out.baseline_cost;
  j["spot_cost"] = out.spot_cost;
  j["savings_fraction"] = out.savings_fraction;
  return j.dump();
}

}  // namespace ess
