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

#ifndef ESS_INJECTOR_MODEL_H_
#define ESS_INJECTOR_MODEL_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ess/common/status.h"

namespace ess {

struct ExponentialModel {
  double mean_ttf_s = 3600;
};

struct WeibullModel {
  double shape = 1;
  double scale_s = 3600;
};

struct TraceEntry {
  uint32_t slot = 0;
  double preemption_time_s = 0;  // seconds since the start of the run
};

struct TraceModel {
  std::string path;
  std::vector<TraceEntry> entries;
};

using LifetimeModel = std::variant<ExponentialModel, WeibullModel, TraceModel>;

struct PreemptionModelParams {
  LifetimeModel distribution = ExponentialModel{};
  double notice_period_s = 30;
  // nullopt: preempted slots stay empty.
  std::optional<double> respawn_delay_s;
  uint64_t seed = 42;
};

Status ValidateModelParams(const PreemptionModelParams& params);

// Named parameter sets. "32vcpu-like" stochastically dominates
// "16vcpu-like": at every t it is at least as likely to have been preempted.
Result<PreemptionModelParams> ModelPreset(std::string_view name);
std::vector<std::string> ModelPresetNames();

// JSON config; trace paths resolve relative to `base_dir`.
Result<PreemptionModelParams> ParseModelParams(std::string_view json,
                                               const std::string& base_dir = "");
Result<PreemptionModelParams> LoadModelParams(const std::string& path);

// CSV "slot,preemption_time_s", optional header line.
Result<std::vector<TraceEntry>> ParseTrace(std::string_view csv);
Result<std::vector<TraceEntry>> LoadTrace(const std::string& path);

// Draws one lifetime in seconds. Not defined for trace models.
double DrawLifetime(const LifetimeModel& model, std::mt19937_64& rng);

// i.i.d. lifetimes from a generator seeded with params.seed. Trace models
// return the recorded preemption times, repeated to length n.
std::vector<double> SampleLifetimes(const PreemptionModelParams& params,
                                    size_t n);

// Analytic CDF of a parametric model; nullopt for traces.
std::optional<std::function<double(double)>> AnalyticCdf(
    const LifetimeModel& model);

// (t, F(t)) at each distinct sample value, F right-continuous.
std::vector<std::pair<double, double>> EmpiricalCdf(std::vector<double> samples);
std::string CdfToCsv(const std::vector<std::pair<double, double>>& cdf);

// sup |F_n - F| over the sample.
double KsStatistic(std::vector<double> samples,
                   const std::function<double(double)>& cdf);
// Asymptotic one-sample critical value; alpha is 0.05 or 0.01.
double KsCriticalValue(size_t n, double alpha = 0.01);

}  // namespace ess

#endif  // ESS_INJECTOR_MODEL_H_
