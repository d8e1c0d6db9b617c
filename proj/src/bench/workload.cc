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

#include "ess/bench/workload.h"

#include <cmath>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace ess {
namespace {

struct Counters {
  std::atomic<uint64_t> bytes_read{0};
  std::atomic<uint64_t> bytes_written{0};
  std::atomic<uint64_t> ops_ok{0};
  std::atomic<uint64_t> ops_failed{0};
  std::atomic<uint64_t> ops_data_unavailable{0};
  std::atomic<uint64_t> read_ops{0};
  std::atomic<uint64_t> write_ops{0};
  std::atomic<uint64_t> delete_ops{0};
};

void FillRandom(std::mt19937_64& rng, std::vector<uint8_t>& out) {
  size_t i = 0;
  for (; i + 8 <= out.size(); i += 8) {
    uint64_t v = rng();
    std::memcpy(out.data() + i, &v, 8);
  }
  uint64_t v = rng();
  for (size_t k = 0; i < out.size(); ++i, ++k) out[i] = static_cast<uint8_t>(v >> (8 * k));
}

void CountResult(Counters& c, const Status& s) {
  if (s.ok()) {
    ++c.ops_ok;
  } else if (s.code() == StatusCode::kDataUnavailable) {
    ++c.ops_data_unavailable;
  } else {
    ++c.ops_failed;
  }
}

}  // namespace

double WorkloadSpec::EffectiveWriteFraction() const {
  switch (kind) {
    case WorkloadKind::kReadOnly:
      return 0;
    case WorkloadKind::kWriteOnly:
      return 1;
    case WorkloadKind::kMixed:
      return write_fraction;
  }
  return 0;
}

std::string_view WorkloadKindName(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::kReadOnly:
      return "read_only";
    case WorkloadKind::kWriteOnly:
      return "write_only";
    case WorkloadKind::kMixed:
      return "mixed";
  }
  return "unknown";
}

Status ValidateWorkloadSpec(const WorkloadSpec& s) {
  if (s.threads < 1) return InvalidArgument("threads must be >= 1");
  if (!(s.write_fraction >= 0 && s.write_fraction <= 1)) {
    return InvalidArgument("write_fraction must be in [0, 1]");
  }
  if (s.EffectiveWriteFraction() < 1 && s.object_count == 0) {
    return InvalidArgument("a workload with reads needs object_count >= 1");
  }
  if (!s.total_ops && !(s.duration_s > 0)) {
    return InvalidArgument("duration_s must be > 0 without total_ops");
  }
  return Status::Ok();
}

Result<WorkloadSpec> ParseWorkloadSpec(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    WorkloadSpec s;
    std::string kind = j.value("kind", std::string("read_only"));
    if (kind == "read_only") {
      s.kind = WorkloadKind::kReadOnly;
    } else if (kind == "write_only") {
      s.kind = WorkloadKind::kWriteOnly;
    } else if (kind == "mixed") {
      s.kind = WorkloadKind::kMixed;
    } else {
      return InvalidArgument("unknown workload kind " + kind);
    }
    s.write_fraction = j.value("write_fraction", s.write_fraction);
    s.object_size = j.value("object_size", s.object_size);
    s.object_count = j.value("object_count", s.object_count);
    s.threads = j.value("threads", s.threads);
    s.duration_s = j.value("duration_s", s.duration_s);
    if (j.contains("total_ops") && !j.at("total_ops").is_null()) {
      s.total_ops = j.at("total_ops").get<uint64_t>();
    }
    if (j.contains("delete_after_ops") && !j.at("delete_after_ops").is_null()) {
      s.delete_after_ops = j.at("delete_after_ops").get<uint64_t>();
    }
    s.seed = j.value("seed", s.seed);
    s.object_prefix = j.value("object_prefix", s.object_prefix);
    ESS_RETURN_IF_ERROR(ValidateWorkloadSpec(s));
    return s;
  } catch (const nlohmann::json::exception& e) {
    return InvalidArgument(std::string("workload spec: ") + e.what());
  }
}

std::string WorkloadSpecToJson(const WorkloadSpec& s) {
  nlohmann::ordered_json j;
  j["kind"] = WorkloadKindName(s.kind);
  j["write_fraction"] = s.write_fraction;
  j["object_size"] = s.object_size;
  j["object_count"] = s.object_count;
  j["threads"] = s.threads;
  j["duration_s"] = s.duration_s;
  j["total_ops"] = s.total_ops ? nlohmann::ordered_json(*s.total_ops) : nullptr;
  j["delete_after_ops"] =
      s.delete_after_ops ? nlohmann::ordered_json(*s.delete_after_ops) : nullptr;
  j["seed"] = s.seed;
  j["object_prefix"] = s.object_prefix;
  return j.dump();
}

std::string DatasetObjectName(const WorkloadSpec& spec, uint64_t i) {
  return spec.object_prefix + "d/" + std::to_string(i);
}

std::vector<uint8_t> DatasetContent(const WorkloadSpec& spec, uint64_t i) {
  std::seed_seq seq{static_cast<uint32_t>(spec.seed),
                    static_cast<uint32_t>(spec.seed >> 32),
                    static_cast<uint32_t>(i), static_cast<uint32_t>(i >> 32)};
  std::mt19937_64 rng(seq);
  std::vector<uint8_t> out(spec.object_size);
  FillRandom(rng, out);
  return out;
}

Status PreloadDataset(Client& client, const WorkloadSpec& spec) {
  std::atomic<uint64_t> next{0};
  std::mutex mu;
  Status first;
  auto work = [&] {
    for (uint64_t i = next++; i < spec.object_count; i = next++) {
      auto put = client.PutObject(DatasetObjectName(spec, i),
                                  DatasetContent(spec, i));
      if (!put.ok()) {
        std::lock_guard<std::mutex> lock(mu);
        if (first.ok()) first = put.status();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  for (int t = 0; t < std::max(spec.threads, 1); ++t) threads.emplace_back(work);
  for (auto& t : threads) t.join();
  return first;
}

Result<RunResult> RunWorkload(const WorkloadSpec& spec, Client& client,
                              const RunOptions& options) {
  ESS_RETURN_IF_ERROR(ValidateWorkloadSpec(spec));
  NamenodeStub namenode(std::make_shared<RpcClient>(),
                        client.options().namenode_address);
  ESS_RETURN_IF_ERROR(namenode.ClusterStatus().status());
  const double write_fraction = spec.EffectiveWriteFraction();
  if (write_fraction < 1) {
    auto probe = namenode.GetMetadata(DatasetObjectName(spec, 0));
    if (!probe.ok()) {
      return NotFound("read workload needs a preloaded dataset: " +
                      probe.status().ToString());
    }
  }

  Counters c;
  const uint64_t retries_before = client.stats().retries;
  const TimePoint start = std::chrono::steady_clock::now();
  const TimePoint end = start + FromSeconds(spec.duration_s);

  auto worker = [&](int w) {
    std::mt19937_64 rng(spec.seed * 1000003ULL + static_cast<uint64_t>(w));
    std::uniform_real_distribution<double> coin(0, 1);
    std::uniform_int_distribution<uint64_t> pick(
        0, spec.object_count == 0 ? 0 : spec.object_count - 1);
    std::vector<uint8_t> payload;
    if (write_fraction > 0) {
      payload.resize(spec.object_size);
      FillRandom(rng, payload);
    }
    std::optional<uint64_t> quota;
    if (spec.total_ops) {
      quota = *spec.total_ops / spec.threads +
              (static_cast<uint64_t>(w) < *spec.total_ops % spec.threads ? 1 : 0);
    }
    std::deque<std::pair<uint64_t, std::string>> live;  // (op issued, name)
    uint64_t written = 0;
    for (uint64_t op = 0;; ++op) {
      if (options.stop != nullptr && options.stop->load()) break;
      if (quota ? op >= *quota : std::chrono::steady_clock::now() >= end) break;
      if (coin(rng) < write_fraction) {
        std::string name = spec.object_prefix + "w/" + std::to_string(spec.seed) +
                           "/" + std::to_string(w) + "/" + std::to_string(written++);
        if (payload.size() >= 8) std::memcpy(payload.data(), &written, 8);
        ++c.write_ops;
        auto put = client.PutObject(name, payload);
        CountResult(c, put.status());
        if (put.ok()) {
          c.bytes_written += payload.size();
          if (spec.delete_after_ops) live.emplace_back(op, std::move(name));
        }
      } else {
        ++c.read_ops;
        auto got = client.GetObject(DatasetObjectName(spec, pick(rng)));
        CountResult(c, got.status());
        if (got.ok()) c.bytes_read += got.value().size();
      }
      while (spec.delete_after_ops && !live.empty() &&
             op - live.front().first >= *spec.delete_after_ops) {
        ++c.delete_ops;
        (void)client.DeleteObject(live.front().second);
        live.pop_front();
      }
    }
  };

  RunResult result;
  std::mutex sample_mu;
  std::condition_variable sample_cv;
  bool workers_done = false;
  uint64_t last[6] = {0, 0, 0, 0, 0, 0};
  TimePoint last_t = start;
  auto take_sample = [&](TimePoint now) {
    uint64_t cur[6] = {c.bytes_read.load(), c.bytes_written.load(),
                       c.ops_ok.load(), client.stats().retries,
                       c.ops_data_unavailable.load(), c.ops_failed.load()};
    MetricsSample s;
    s.t = ToSeconds(now - start);
    s.window_s = ToSeconds(now - last_t);
    s.bytes_read = cur[0] - last[0];
    s.bytes_written = cur[1] - last[1];
    s.ops_ok = cur[2] - last[2];
    s.ops_retried = cur[3] - last[3];
    s.ops_data_unavailable = cur[4] - last[4];
    s.ops_failed = cur[5] - last[5];
    std::copy(cur, cur + 6, last);
    last_t = now;
    result.samples.push_back(s);
    if (options.on_sample) options.on_sample(s);
  };
  last[3] = retries_before;

  std::thread sampler([&] {
    std::unique_lock<std::mutex> lock(sample_mu);
    TimePoint next = start + options.sample_interval;
    while (!sample_cv.wait_until(lock, next, [&] { return workers_done; })) {
      take_sample(next);
      next += options.sample_interval;
    }
  });

  std::vector<std::thread> threads;
  for (int w = 0; w < spec.threads; ++w) threads.emplace_back(worker, w);
  for (auto& t : threads) t.join();
  const TimePoint finished = std::chrono::steady_clock::now();
  {
    std::lock_guard<std::mutex> lock(sample_mu);
    workers_done = true;
  }
  sample_cv.notify_all();
  sampler.join();
  if (finished > last_t) take_sample(finished);

  RunSummary& s = result.summary;
  s.runtime_s = ToSeconds(finished - start);
  s.read_ops = c.read_ops;
  s.write_ops = c.write_ops;
  s.delete_ops = c.delete_ops;
  s.ops_ok = c.ops_ok;
  s.ops_failed = c.ops_failed;
  s.ops_data_unavailable = c.ops_data_unavailable;
  s.retries = client.stats().retries - retries_before;
  s.bytes_read = c.bytes_read;
  s.bytes_written = c.bytes_written;
  s.aggregate_mb_per_s =
      s.runtime_s > 0 ? (s.bytes_read + s.bytes_written) / 1e6 / s.runtime_s : 0;
  return result;
}

std::string BandwidthTimeseriesCsv(const std::vector<MetricsSample>& samples) {
  std::ostringstream out;
  out << "t,mb_per_s,read_mb_per_s,write_mb_per_s\n";
  for (const auto& s : samples) {
    if (s.ops_ok + s.ops_failed + s.ops_data_unavailable == 0 ||
        s.window_s <= 0) {
      continue;
    }
    double r = s.bytes_read / 1e6 / s.window_s;
    double w = s.bytes_written / 1e6 / s.window_s;
    out << s.t << ',' << r + w << ',' << r << ',' << w << '\n';
  }
  return out.str();
}

std::string SamplesCsv(const std::vector<MetricsSample>& samples) {
  std::ostringstream out;
  out << "t,window_s,bytes_read,bytes_written,ops_ok,ops_retried,"
         "ops_data_unavailable,ops_failed\n";
  for (const auto& s : samples) {
    out << s.t << ',' << s.window_s << ',' << s.bytes_read << ','
        << s.bytes_written << ',' << s.ops_ok << ',' << s.ops_retried << ','
        << s.ops_data_unavailable << ',' << s.ops_failed << '\n';
  }
  return out.str();
}

std::string RunReportJson(const WorkloadSpec& spec, const RunResult& result,
                          const ReportContext& context) {
  const RunSummary& s = result.summary;
  nlohmann::ordered_json j;
  j["spec"] = nlohmann::ordered_json::parse(WorkloadSpecToJson(spec));
  j["seed"] = spec.seed;
  j["cluster"] = nlohmann::ordered_json::parse(
      context.cluster_json.empty() ? "{}" : context.cluster_json);
  j["summary"] = {
      {"runtime_s", s.runtime_s},
      {"read_ops", s.read_ops},
      {"write_ops", s.write_ops},
      {"delete_ops", s.delete_ops},
      {"ops_ok", s.ops_ok},
      {"ops_failed", s.ops_failed},
      {"ops_data_unavailable", s.ops_data_unavailable},
      {"retries", s.retries},
      {"bytes_read", s.bytes_read},
      {"bytes_written", s.bytes_written},
      {"aggregate_mb_per_s", s.aggregate_mb_per_s},
  };
  j["sample_count"] = result.samples.size();
  j["event_log"] = context.event_log;
  return j.dump(2);
}

double CoefficientOfVariation(const std::vector<double>& values) {
  if (values.empty()) return 0;
  double mean = 0;
  for (double v : values) mean += v;
  mean /= values.size();
  if (mean == 0) return 0;
  double var = 0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= values.size();
  return std::sqrt(var) / mean;
}

}  // namespace ess
