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

#include "ess/injector/model.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ess {
namespace {

Result<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return NotFound("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Status ValidateModelParams(const PreemptionModelParams& p) {
  if (!(p.notice_period_s >= 0)) return InvalidArgument("notice_period_s < 0");
  if (p.respawn_delay_s && !(*p.respawn_delay_s >= 0)) {
    return InvalidArgument("respawn_delay_s < 0");
  }
  if (const auto* e = std::get_if<ExponentialModel>(&p.distribution)) {
    if (!(e->mean_ttf_s > 0)) return InvalidArgument("mean_ttf_s must be > 0");
  } else if (const auto* w = std::get_if<WeibullModel>(&p.distribution)) {
    if (!(w->shape > 0)) return InvalidArgument("shape must be > 0");
    if (!(w->scale_s > 0)) return InvalidArgument("scale_s must be > 0");
  } else {
    const auto& t = std::get<TraceModel>(p.distribution);
    std::vector<double> last;
    for (const auto& e : t.entries) {
      if (!(e.preemption_time_s >= 0)) {
        return InvalidArgument("negative preemption time in trace");
      }
      if (e.slot >= last.size()) last.resize(e.slot + 1, 0);
      if (e.preemption_time_s < last[e.slot]) {
        return InvalidArgument("trace times decrease within slot " +
                               std::to_string(e.slot));
      }
      last[e.slot] = e.preemption_time_s;
    }
  }
  return Status::Ok();
}

std::vector<std::string> ModelPresetNames() {
  return {"16vcpu-like", "32vcpu-like"};
}

Result<PreemptionModelParams> ModelPreset(std::string_view name) {
  PreemptionModelParams p;
  p.notice_period_s = 30;
  p.respawn_delay_s = 60;
  // Same shape, half the scale: the larger instance type fails sooner at
  // every quantile.
  if (name == "16vcpu-like") {
    p.distribution = WeibullModel{1.2, 36000};
  } else if (name == "32vcpu-like") {
    p.distribution = WeibullModel{1.2, 18000};
  } else {
    return NotFound("unknown preset " + std::string(name));
  }
  return p;
}

Result<std::vector<TraceEntry>> ParseTrace(std::string_view csv) {
  std::vector<TraceEntry> out;
  std::istringstream in{std::string(csv)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) {
      return InvalidArgument("trace line " + std::to_string(line_no) +
                             ": expected slot,preemption_time_s");
    }
    std::string slot = line.substr(0, comma);
    std::string time = line.substr(comma + 1);
    if (line_no == 1 && slot == "slot") continue;
    try {
      size_t used = 0;
      unsigned long s = std::stoul(slot, &used);
      if (used != slot.size()) throw std::invalid_argument(slot);
      double t = std::stod(time, &used);
      if (used != time.size()) throw std::invalid_argument(time);
      out.push_back({static_cast<uint32_t>(s), t});
    } catch (const std::exception&) {
      return InvalidArgument("trace line " + std::to_string(line_no) +
                             ": malformed number");
    }
  }
  return out;
}

Result<std::vector<TraceEntry>> LoadTrace(const std::string& path) {
  ESS_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParseTrace(text);
}

Result<PreemptionModelParams> ParseModelParams(std::string_view text,
                                               const std::string& base_dir) {
  try {
    auto j = nlohmann::json::parse(text);
    PreemptionModelParams p;
    if (j.contains("preset")) {
      ESS_ASSIGN_OR_RETURN(p, ModelPreset(j.at("preset").get<std::string>()));
    }
    if (j.contains("distribution")) {
      const auto& d = j.at("distribution");
      std::string type = d.at("type").get<std::string>();
      if (type == "exponential") {
        p.distribution = ExponentialModel{d.at("mean_ttf_s").get<double>()};
      } else if (type == "weibull") {
        p.distribution =
            WeibullModel{d.at("shape").get<double>(), d.at("scale_s").get<double>()};
      } else if (type == "trace") {
        std::filesystem::path path = d.at("path").get<std::string>();
        if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
        ESS_ASSIGN_OR_RETURN(auto entries, LoadTrace(path.string()));
        p.distribution = TraceModel{path.string(), std::move(entries)};
      } else {
        return InvalidArgument("unknown distribution type " + type);
      }
    }
    if (j.contains("notice_period_s")) {
      p.notice_period_s = j.at("notice_period_s").get<double>();
    }
    if (j.contains("respawn_delay_s")) {
      const auto& r = j.at("respawn_delay_s");
      if (r.is_null()) {
        p.respawn_delay_s.reset();
      } else {
        p.respawn_delay_s = r.get<double>();
      }
    }
    if (j.contains("seed")) p.seed = j.at("seed").get<uint64_t>();
    ESS_RETURN_IF_ERROR(ValidateModelParams(p));
    return p;
  } catch (const nlohmann::json::exception& e) {
    return InvalidArgument(std::string("preemption model config: ") + e.what());
  }
}

Result<PreemptionModelParams> LoadModelParams(const std::string& path) {
  ESS_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParseModelParams(text,
                          std::filesystem::path(path).parent_path().string());
}

double DrawLifetime(const LifetimeModel& model, std::mt19937_64& rng) {
  if (const auto* e = std::get_if<ExponentialModel>(&model)) {
    return std::exponential_distribution<double>(1.0 / e->mean_ttf_s)(rng);
  }
  const auto& w = std::get<WeibullModel>(model);
  return std::weibull_distribution<double>(w.shape, w.scale_s)(rng);
}

std::vector<double> SampleLifetimes(const PreemptionModelParams& params,
                                    size_t n) {
  std::vector<double> out;
  out.reserve(n);
  if (const auto* t = std::get_if<TraceModel>(&params.distribution)) {
    for (size_t i = 0; i < n && !t->entries.empty(); ++i) {
      out.push_back(t->entries[i % t->entries.size()].preemption_time_s);
    }
    return out;
  }
  std::mt19937_64 rng(params.seed);
  for (size_t i = 0; i < n; ++i) out.push_back(DrawLifetime(params.distribution, rng));
  return out;
}

std::optional<std::function<double(double)>> AnalyticCdf(
    const LifetimeModel& model) {
  if (const auto* e = std::get_if<ExponentialModel>(&model)) {
    double mean = e->mean_ttf_s;
    return [mean](double t) { return t <= 0 ? 0.0 : 1 - std::exp(-t / mean); };
  }
  if (const auto* w = std::get_if<WeibullModel>(&model)) {
    double k = w->shape, lambda = w->scale_s;
    return [k, lambda](double t) {
      return t <= 0 ? 0.0 : 1 - std::exp(-std::pow(t / lambda, k));
    };
  }
  return std::nullopt;
}

std::vector<std::pair<double, double>> EmpiricalCdf(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  std::vector<std::pair<double, double>> out;
  const double n = static_cast<double>(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
    out.emplace_back(samples[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

std::string CdfToCsv(const std::vector<std::pair<double, double>>& cdf) {
  std::ostringstream out;
  out.precision(17);
  out << "t,F\n";
  for (const auto& [t, f] : cdf) out << t << ',' << f << '\n';
  return out.str();
}

double KsStatistic(std::vector<double> samples,
                   const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0;
  for (size_t i = 0; i < samples.size(); ++i) {
    double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double KsCriticalValue(size_t n, double alpha) {
  return std::sqrt(-0.5 * std::log(alpha / 2)) / std::sqrt(static_cast<double>(n));
}

}  // namespace ess
