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

#ifndef ESS_BENCH_WORKLOAD_H_
#define ESS_BENCH_WORKLOAD_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ess/client/client.h"

namespace ess {

enum class WorkloadKind { kReadOnly, kWriteOnly, kMixed };

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::kReadOnly;
  double write_fraction = 0;  // used by kMixed
  uint64_t object_size = kDefaultBlockSize;
  // Size of the preloaded dataset that reads draw from.
  uint64_t object_count = 64;
  int threads = 4;
  double duration_s = 10;
  // Fixed amount of work instead of a fixed duration; split evenly over the
  // threads so every run does the same operations.
  std::optional<uint64_t> total_ops;
  // Short-lived data: an object is deleted once its writer has issued this
  // many further operations. nullopt keeps everything.
  std::optional<uint64_t> delete_after_ops;
  uint64_t seed = 42;
  std::string object_prefix = "bench/";

  double EffectiveWriteFraction() const;
};

Status ValidateWorkloadSpec(const WorkloadSpec& spec);
Result<WorkloadSpec> ParseWorkloadSpec(std::string_view json);
std::string WorkloadSpecToJson(const WorkloadSpec& spec);
std::string_view WorkloadKindName(WorkloadKind kind);

// Name and deterministic content of dataset object `i`.
std::string DatasetObjectName(const WorkloadSpec& spec, uint64_t i);
std::vector<uint8_t> DatasetContent(const WorkloadSpec& spec, uint64_t i);

// Writes the read dataset with `threads` writers.
Status PreloadDataset(Client& client, const WorkloadSpec& spec);

struct MetricsSample {
  double t = 0;         // end of the window, seconds since start
  double window_s = 0;
  uint64_t bytes_read = 0;
  uint64_t bytes_written = 0;
  uint64_t ops_ok = 0;
  uint64_t ops_retried = 0;
  uint64_t ops_data_unavailable = 0;
  uint64_t ops_failed = 0;
};

struct RunSummary {
  double runtime_s = 0;
  uint64_t read_ops = 0;
  uint64_t write_ops = 0;
  uint64_t delete_ops = 0;
  uint64_t ops_ok = 0;
  uint64_t ops_failed = 0;
  uint64_t ops_data_unavailable = 0;
  uint64_t retries = 0;
  uint64_t bytes_read = 0;
  uint64_t bytes_written = 0;
  double aggregate_mb_per_s = 0;
};

struct RunOptions {
  Duration sample_interval = std::chrono::seconds(1);
  // Called from the sampler thread after each sample.
  std::function<void(const MetricsSample&)> on_sample;
  // Checked before every operation; setting it ends the run early.
  const std::atomic<bool>* stop = nullptr;
};

struct RunResult {
  RunSummary summary;
  std::vector<MetricsSample> samples;
};

// Drives `client` with spec.threads workers. Fails up front if the namenode
// is unreachable or a read workload has no dataset.
Result<RunResult> RunWorkload(const WorkloadSpec& spec, Client& client,
                              const RunOptions& options = {});

// "t,mb_per_s,read_mb_per_s,write_mb_per_s"; windows without operations
// produce no row. MB is 10^6 bytes.
std::string BandwidthTimeseriesCsv(const std::vector<MetricsSample>& samples);

// One row per sample, including empty windows.
std::string SamplesCsv(const std::vector<MetricsSample>& samples);

struct ReportContext {
  std::string cluster_json = "{}";  // cluster configuration, as JSON
  std::string event_log;            // path of the injector log, if any
};

// Machine-readable run record: spec, seed, cluster, totals, samples.
std::string RunReportJson(const WorkloadSpec& spec, const RunResult& result,
                          const ReportContext& context);

// Population coefficient of variation; 0 for an empty or all-zero input.
double CoefficientOfVariation(const std::vector<double>& values);

}  // namespace ess

#endif  // ESS_BENCH_WORKLOAD_H_
