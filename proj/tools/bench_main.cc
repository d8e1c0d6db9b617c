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

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "ess/bench/cost.h"
#include "ess/bench/sizing.h"
#include "ess/bench/workload.h"
#include "ess/cluster/local_cluster.h"
#include "ess/injector/model.h"
#include "json.hpp"

namespace {

ess::Result<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return ess::NotFound("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int Fail(const ess::Status& s) {
  std::cerr << s.ToString() << "\n";
  return 1;
}

// Cluster JSON is either {"namenode": "host:port"} for a running cluster or
// {"local": {...}} to start one in this process, optionally with
// "preemption" (a model config object) and "event_log".
int Run(const std::string& spec_path, const std::string& cluster_path,
        const std::string& out_path, const std::string& timeseries_path,
        const std::string& samples_path, bool preload) {
  auto spec_text = ReadFile(spec_path);
  if (!spec_text.ok()) return Fail(spec_text.status());
  auto spec = ess::ParseWorkloadSpec(spec_text.value());
  if (!spec.ok()) return Fail(spec.status());
  auto cluster_text = ReadFile(cluster_path);
  if (!cluster_text.ok()) return Fail(cluster_text.status());

  nlohmann::json cj;
  try {
    cj = nlohmann::json::parse(cluster_text.value());
  } catch (const nlohmann::json::exception& e) {
    return Fail(ess::InvalidArgument(e.what()));
  }

  std::unique_ptr<ess::LocalCluster> local;
  ess::ClientOptions client_options;
  std::optional<ess::PreemptionModelParams> preemption;
  std::string event_log = cj.value("event_log", std::string());
  if (cj.contains("local")) {
    const auto& l = cj.at("local");
    ess::LocalClusterOptions lo;
    lo.datanodes = l.value("datanodes", lo.datanodes);
    lo.namenode.block_size = l.value("block_size_bytes", lo.namenode.block_size);
    lo.datanode.capacity_blocks =
        l.value("capacity_blocks", lo.datanode.capacity_blocks);
    if (l.contains("egress_limit")) {
      lo.datanode.egress_bytes_per_sec = l.at("egress_limit").get<double>();
    }
    if (l.contains("ingress_limit")) {
      lo.datanode.ingress_bytes_per_sec = l.at("ingress_limit").get<double>();
    }
    auto started = ess::LocalCluster::Start(lo);
    if (!started.ok()) return Fail(started.status());
    local = std::move(started).value();
    client_options.namenode_address = local->namenode_address();
    if (cj.contains("preemption")) {
      auto params = ess::ParseModelParams(cj.at("preemption").dump());
      if (!params.ok()) return Fail(params.status());
      preemption = params.value();
    }
    preload = true;
  } else {
    client_options.namenode_address = cj.at("namenode").get<std::string>();
  }

  ess::Client client(client_options);
  if (preload && spec.value().EffectiveWriteFraction() < 1) {
    ess::Status s = ess::PreloadDataset(client, spec.value());
    if (!s.ok()) return Fail(s);
  }

  std::atomic<bool> stop_injector{false};
  std::thread injector;
  std::ofstream events;
  if (preemption && local) {
    if (!event_log.empty()) events.open(event_log);
    injector = std::thread([&] {
      ess::RunSchedule(*preemption, local->live_datanodes(), local.get(),
                       ess::SystemClock::Get(), std::chrono::hours(24 * 365),
                       [&](const ess::PreemptionEvent& e) {
                         if (events.is_open()) events << ess::EventToJson(e) << std::endl;
                       },
                       &stop_injector);
    });
  }
  ess::RunOptions ro;
  ro.on_sample = [](const ess::MetricsSample& s) {
    spdlog::info("t={:.0f}s read={:.1f}MB/s write={:.1f}MB/s ok={} retried={}",
                 s.t, s.bytes_read / 1e6 / s.window_s,
                 s.bytes_written / 1e6 / s.window_s, s.ops_ok, s.ops_retried);
  };
  auto result = ess::RunWorkload(spec.value(), client, ro);
  stop_injector = true;
  if (injector.joinable()) injector.join();
  if (!result.ok()) return Fail(result.status());

  ess::ReportContext ctx;
  ctx.cluster_json = cj.dump();
  ctx.event_log = event_log;
  std::string report = ess::RunReportJson(spec.value(), result.value(), ctx);
  if (out_path.empty()) {
    std::cout << report << "\n";
  } else {
    std::ofstream(out_path) << report << "\n";
  }
  if (!timeseries_path.empty()) {
    std::ofstream(timeseries_path)
        << ess::BandwidthTimeseriesCsv(result.value().samples);
  }
  if (!samples_path.empty()) {
    std::ofstream(samples_path) << ess::SamplesCsv(result.value().samples);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmarks and capacity planning for the ephemeral block store"};
  app.require_subcommand(1);

  std::string spec_path, cluster_path, out_path, timeseries_path, samples_path;
  bool preload = false;
  auto* run = app.add_subcommand("run", "run a workload");
  run->add_option("--spec", spec_path, "workload spec JSON")->required();
  run->add_option("--cluster", cluster_path, "cluster JSON")->required();
  run->add_option("--out", out_path, "report JSON (default stdout)");
  run->add_option("--timeseries", timeseries_path, "bandwidth CSV");
  run->add_option("--samples", samples_path, "raw per-window samples CSV");
  run->add_flag("--preload", preload, "write the read dataset first");

  std::string inputs_path;
  auto* cost = app.add_subcommand("cost", "spot vs on-demand cost");
  cost->add_option("--inputs", inputs_path, "cost inputs JSON");

  std::string memory = "64GB", egress = "32Gbit", notice = "30s";
  auto* sizing = app.add_subcommand("sizing", "drain time for a node size");
  sizing->add_option("--memory", memory, "node memory, e.g. 64GB");
  sizing->add_option("--egress", egress, "egress bandwidth, e.g. 32Gbit");
  sizing->add_option("--notice", notice, "notice period, e.g. 30s");

  std::string samples_in;
  auto* cdf = app.add_subcommand("cdf", "empirical CDF of a sample file");
  cdf->add_option("--samples", samples_in,
                  "one value per line, or CSV whose last column is the value")
      ->required();
  CLI11_PARSE(app, argc, argv);

  if (*run) {
    return Run(spec_path, cluster_path, out_path, timeseries_path, samples_path,
               preload);
  }
  if (*cost) {
    ess::CostInputs in;
    if (!inputs_path.empty()) {
      auto text = ReadFile(inputs_path);
      if (!text.ok()) return Fail(text.status());
      auto parsed = ess::ParseCostInputs(text.value());
      if (!parsed.ok()) return Fail(parsed.status());
      in = parsed.value();
    }
    std::cout << ess::CostResultToJson(in, ess::CostModel(in)) << "\n";
    return 0;
  }
  if (*sizing) {
    auto m = ess::ParseBytes(memory);
    auto e = ess::ParseBitsPerSecond(egress);
    auto n = ess::ParseSeconds(notice);
    if (!m.ok()) return Fail(m.status());
    if (!e.ok()) return Fail(e.status());
    if (!n.ok()) return Fail(n.status());
    ess::SizingInput in{m.value(), e.value(), n.value()};
    nlohmann::ordered_json j;
    j["memory_bytes"] = in.memory_bytes;
    j["egress_bits_per_sec"] = in.egress_bits_per_sec;
    j["notice_period_s"] = in.notice_period_s;
    j["sizing_time_s"] = ess::SizingTime(in);
    j["feasible"] = ess::SizingFeasible(in);
    j["max_capacity_bytes"] =
        ess::MaxCapacityBytes(in.egress_bits_per_sec, in.notice_period_s);
    std::cout << j.dump() << "\n";
    return 0;
  }
  if (*cdf) {
    auto text = ReadFile(samples_in);
    if (!text.ok()) return Fail(text.status());
    std::vector<double> values;
    std::istringstream lines(text.value());
    std::string line;
    while (std::getline(lines, line)) {
      auto comma = line.rfind(',');
      std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
      try {
        size_t used = 0;
        double v = std::stod(field, &used);
        values.push_back(v);
      } catch (const std::exception&) {
        // header or blank line
      }
    }
    if (values.empty()) return Fail(ess::InvalidArgument("no samples"));
    std::cout << ess::CdfToCsv(ess::EmpiricalCdf(values));
    return 0;
  }
  return 0;
}
