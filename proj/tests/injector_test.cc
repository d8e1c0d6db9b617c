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

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ess/injector/model.h"
#include "ess/injector/schedule.h"
#include "json.hpp"

namespace ess {
namespace {

// Two-sided KS distance computed straight from the definition: the largest
// gap between the step function and the CDF, checked on both sides of
// every jump.
double ReferenceKs(std::vector<double> x, const std::function<double(double)>& F) {
  std::sort(x.begin(), x.end());
  double n = static_cast<double>(x.size());
  double worst = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    double below = static_cast<double>(i) / n;
    double above = static_cast<double>(i + 1) / n;
    worst = std::max(worst, std::fabs(F(x[i]) - below));
    worst = std::max(worst, std::fabs(above - F(x[i])));
  }
  return worst;
}

PreemptionModelParams Exponential(double mean, uint64_t seed = 42) {
  PreemptionModelParams p;
  p.distribution = ExponentialModel{mean};
  p.seed = seed;
  return p;
}

PreemptionModelParams Weibull(double shape, double scale, uint64_t seed = 42) {
  PreemptionModelParams p;
  p.distribution = WeibullModel{shape, scale};
  p.seed = seed;
  return p;
}

TEST(ModelTest, ExponentialMeanWithinTwoPercent) {
  auto s = SampleLifetimes(Exponential(3600), 100000);
  double mean = std::accumulate(s.begin(), s.end(), 0.0) / s.size();
  EXPECT_NEAR(mean, 3600, 0.02 * 3600);
}

TEST(ModelTest, WeibullMeanMatchesGammaFormula) {
  auto s = SampleLifetimes(Weibull(1.2, 36000), 100000);
  double mean = std::accumulate(s.begin(), s.end(), 0.0) / s.size();
  double expected = 36000 * std::tgamma(1 + 1 / 1.2);
  EXPECT_NEAR(mean, expected, 0.02 * expected);
}

TEST(ModelTest, SamplingIsSeedDeterministic) {
  EXPECT_EQ(SampleLifetimes(Exponential(10, 5), 1000),
            SampleLifetimes(Exponential(10, 5), 1000));
  EXPECT_NE(SampleLifetimes(Exponential(10, 5), 1000),
            SampleLifetimes(Exponential(10, 6), 1000));
}

TEST(ModelTest, KsCriticalValueMatchesAsymptoticFormula) {
  // c(0.01) = sqrt(-ln(0.005) / 2) = 1.62762
  EXPECT_NEAR(KsCriticalValue(10000, 0.01), 1.62762 / 100, 1e-5);
  EXPECT_NEAR(KsCriticalValue(100, 0.05), 1.35810 / 10, 1e-5);
}

TEST(ModelTest, KsStatisticMatchesReference) {
  auto s = SampleLifetimes(Weibull(0.8, 50, 3), 2000);
  auto F = *AnalyticCdf(WeibullModel{0.8, 50});
  EXPECT_NEAR(KsStatistic(s, F), ReferenceKs(s, F), 1e-12);
  // Uniform oracle: samples {0.1, 0.5, 0.9} against U(0,1).
  auto uniform = [](double t) { return std::clamp(t, 0.0, 1.0); };
  EXPECT_NEAR(KsStatistic({0.1, 0.5, 0.9}, uniform), 0.2333333333, 1e-9);
}

TEST(ModelTest, TenThousandSamplesPassKs) {
  for (const auto& p : {Exponential(3600), Weibull(1.2, 36000), Weibull(0.7, 100),
                        Weibull(2.5, 18000)}) {
    auto s = SampleLifetimes(p, 10000);
    double d = ReferenceKs(s, *AnalyticCdf(p.distribution));
    EXPECT_LT(d, KsCriticalValue(10000, 0.01));
  }
}

TEST(ModelTest, WeibullShapeOneIsExponential) {
  auto s = SampleLifetimes(Weibull(1.0, 500), 10000);
  auto exp_cdf = *AnalyticCdf(ExponentialModel{500});
  EXPECT_LT(ReferenceKs(s, exp_cdf), KsCriticalValue(10000, 0.01));
}

TEST(ModelTest, KsRejectsWrongFamily) {
  auto s = SampleLifetimes(Weibull(3.0, 500), 10000);
  auto exp_cdf = *AnalyticCdf(ExponentialModel{500});
  EXPECT_GT(ReferenceKs(s, exp_cdf), KsCriticalValue(10000, 0.01));
}

TEST(ModelTest, EmpiricalCdfWithinDkwBand) {
  // DKW: P(sup|F_n - F| > e) <= 2 exp(-2 n e^2); e = 0.02 at n = 10^4 gives
  // a bound of 6.7e-4.
  auto p = Exponential(1000, 11);
  auto F = *AnalyticCdf(p.distribution);
  for (const auto& [t, fn] : EmpiricalCdf(SampleLifetimes(p, 10000))) {
    ASSERT_LT(std::fabs(fn - F(t)), 0.02) << t;
  }
}

TEST(ModelTest, EmpiricalCdfSteps) {
  auto cdf = EmpiricalCdf({3, 1, 2});
  ASSERT_EQ(cdf.size(), 3u);
  EXPECT_EQ(cdf[0].first, 1);
  EXPECT_DOUBLE_EQ(cdf[0].second, 1.0 / 3);
  EXPECT_DOUBLE_EQ(cdf[1].second, 2.0 / 3);
  EXPECT_DOUBLE_EQ(cdf[2].second, 1.0);
  auto dup = EmpiricalCdf({1, 1, 2, 2});
  ASSERT_EQ(dup.size(), 2u);
  EXPECT_DOUBLE_EQ(dup[0].second, 0.5);
  EXPECT_DOUBLE_EQ(dup[1].second, 1.0);
  std::string csv = CdfToCsv(cdf);
  EXPECT_EQ(csv.substr(0, 4), "t,F\n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(ModelTest, AnalyticCdfValues) {
  auto F = *AnalyticCdf(ExponentialModel{10});
  EXPECT_DOUBLE_EQ(F(0), 0);
  EXPECT_NEAR(F(10), 1 - std::exp(-1.0), 1e-15);
  auto W = *AnalyticCdf(WeibullModel{2, 10});
  EXPECT_NEAR(W(20), 1 - std::exp(-4.0), 1e-15);
  EXPECT_FALSE(AnalyticCdf(TraceModel{}).has_value());
}

TEST(ModelTest, PresetsAreValid) {
  auto names = ModelPresetNames();
  ASSERT_FALSE(names.empty());
  for (const auto& n : names) {
    auto p = ModelPreset(n);
    ASSERT_TRUE(p.ok()) << n;
    EXPECT_TRUE(ValidateModelParams(p.value()).ok()) << n;
    EXPECT_EQ(p.value().notice_period_s, 30);
  }
  EXPECT_FALSE(ModelPreset("nope").ok());
}

TEST(ModelTest, ParsesConfig) {
  auto p = ParseModelParams(R"({
    "distribution": {"type": "weibull", "shape": 1.5, "scale_s": 900},
    "notice_period_s": 120, "respawn_delay_s": null, "seed": 7})");
  ASSERT_TRUE(p.ok()) << p.status().ToString();
  const auto& w = std::get<WeibullModel>(p.value().distribution);
  EXPECT_EQ(w.shape, 1.5);
  EXPECT_EQ(w.scale_s, 900);
  EXPECT_EQ(p.value().notice_period_s, 120);
  EXPECT_FALSE(p.value().respawn_delay_s.has_value());
  EXPECT_EQ(p.value().seed, 7u);

  auto preset = ParseModelParams(R"({"preset": "16vcpu-like", "seed": 9})");
  ASSERT_TRUE(preset.ok());
  EXPECT_EQ(preset.value().seed, 9u);
  EXPECT_TRUE(std::holds_alternative<WeibullModel>(preset.value().distribution));

  EXPECT_FALSE(ParseModelParams(R"({"distribution": {"type": "pareto"}})").ok());
  EXPECT_FALSE(ParseModelParams(
      R"({"distribution": {"type": "exponential", "mean_ttf_s": -1}})").ok());
  EXPECT_FALSE(ParseModelParams(R"({"notice_period_s": -5})").ok());
  EXPECT_FALSE(ParseModelParams("[").ok());
}

TEST(ModelTest, ParsesTraces) {
  auto t = ParseTrace("slot,preemption_time_s\r\n0,12.5\n# comment\n\n2,3\n");
  ASSERT_TRUE(t.ok()) << t.status().ToString();
  ASSERT_EQ(t.value().size(), 2u);
  EXPECT_EQ(t.value()[0].slot, 0u);
  EXPECT_EQ(t.value()[0].preemption_time_s, 12.5);
  EXPECT_EQ(t.value()[1].slot, 2u);
  EXPECT_TRUE(ParseTrace("1,2\n").ok());
  EXPECT_FALSE(ParseTrace("1;2\n").ok());
  EXPECT_FALSE(ParseTrace("x,2\n").ok());
  EXPECT_FALSE(ParseTrace("1,2s\n").ok());
}

class FakeControl : public ClusterControl {
 public:
  Status Notice(uint32_t slot, DatanodeId node, TimePoint deadline) override {
    std::lock_guard<std::mutex> l(mu_);
    calls.push_back("notice " + std::to_string(slot) + " " + std::to_string(node.value));
    deadlines.push_back(deadline);
    return Status::Ok();
  }
  Status Terminate(uint32_t slot, DatanodeId node) override {
    std::lock_guard<std::mutex> l(mu_);
    calls.push_back("terminate " + std::to_string(slot) + " " +
                    std::to_string(node.value));
    return Status::Ok();
  }
  Result<DatanodeId> Respawn(uint32_t slot) override {
    std::lock_guard<std::mutex> l(mu_);
    DatanodeId id{next_id++};
    calls.push_back("respawn " + std::to_string(slot) + " " + std::to_string(id.value));
    return id;
  }

  std::vector<std::string> calls;
  std::vector<TimePoint> deadlines;
  uint32_t next_id = 100;

 private:
  std::mutex mu_;
};

std::vector<std::string> RunLogged(const PreemptionModelParams& p, size_t nodes,
                                   double hours, FakeControl* control = nullptr) {
  SimulatedClock clock;
  FakeControl local;
  if (control == nullptr) control = &local;
  std::vector<DatanodeId> fleet;
  for (uint32_t i = 0; i < nodes; ++i) fleet.push_back(DatanodeId{i + 1});
  std::vector<std::string> lines;
  RunSchedule(p, fleet, control, &clock, FromSeconds(hours * 3600),
              [&](const PreemptionEvent& e) { lines.push_back(EventToJson(e)); });
  return lines;
}

TEST(ScheduleTest, FixedSeedGivesIdenticalLogs) {
  PreemptionModelParams p = Weibull(1.2, 3600, 1234);
  p.respawn_delay_s = 60;
  auto a = RunLogged(p, 8, 24);
  auto b = RunLogged(p, 8, 24);
  ASSERT_GT(a.size(), 50u);
  EXPECT_EQ(a, b);
  p.seed = 1235;
  EXPECT_NE(RunLogged(p, 8, 24), a);
}

TEST(ScheduleTest, EventsFollowNoticeTerminateRespawn) {
  PreemptionModelParams p = Exponential(600, 3);
  p.notice_period_s = 30;
  p.respawn_delay_s = 60;
  FakeControl control;
  auto lines = RunLogged(p, 4, 10, &control);
  ASSERT_FALSE(lines.empty());
  EXPECT_EQ(lines.size(), control.calls.size());

  std::map<uint32_t, std::vector<nlohmann::json>> per_slot;
  double last_time = -1;
  for (const auto& l : lines) {
    auto j = nlohmann::json::parse(l);
    EXPECT_GE(j["time"].get<double>(), last_time);
    last_time = j["time"].get<double>();
    per_slot[j["slot"].get<uint32_t>()].push_back(j);
  }
  for (const auto& [slot, events] : per_slot) {
    const char* cycle[] = {"notice", "terminate", "respawn"};
    for (size_t i = 0; i < events.size(); ++i) {
      EXPECT_EQ(events[i]["kind"], cycle[i % 3]) << "slot " << slot << " event " << i;
      if (i > 0 && events[i]["kind"] == "terminate") {
        EXPECT_NEAR(events[i]["time"].get<double>() - events[i - 1]["time"].get<double>(),
                    30, 1e-6);
        EXPECT_EQ(events[i]["node_id"], events[i - 1]["node_id"]);
      }
      if (i > 0 && events[i]["kind"] == "respawn") {
        EXPECT_NEAR(events[i]["time"].get<double>() - events[i - 1]["time"].get<double>(),
                    60, 1e-6);
        EXPECT_NE(events[i]["node_id"], events[i - 1]["node_id"]);
      }
    }
  }
}

TEST(ScheduleTest, JsonFieldOrder) {
  std::string j = EventToJson({12.5, 3, DatanodeId{7}, EventKind::kTerminate});
  EXPECT_EQ(j, R"({"time":12.5,"slot":3,"node_id":7,"kind":"terminate"})");
}

TEST(ScheduleTest, ZeroNoticeTerminatesWithoutWarning) {
  PreemptionModelParams p = Exponential(600, 8);
  p.notice_period_s = 0;
  FakeControl control;
  auto lines = RunLogged(p, 3, 5, &control);
  ASSERT_FALSE(lines.empty());
  for (const auto& l : lines) {
    EXPECT_EQ(nlohmann::json::parse(l)["kind"], "terminate");
  }
  // Without respawn each slot dies once.
  EXPECT_LE(lines.size(), 3u);
}

TEST(ScheduleTest, NoticeDeadlineIsNoticeLater) {
  PreemptionModelParams p = Exponential(100, 2);
  p.notice_period_s = 45;
  SimulatedClock clock;
  FakeControl control;
  TimePoint start = clock.Now();
  std::vector<PreemptionEvent> log =
      RunSchedule(p, {DatanodeId{1}}, &control, &clock, std::chrono::hours(1));
  ASSERT_EQ(control.deadlines.size(), 1u);
  ASSERT_GE(log.size(), 2u);
  EXPECT_EQ(log[0].kind, EventKind::kNotice);
  EXPECT_EQ(control.deadlines[0], start + FromSeconds(log[0].time_s + 45));
}

TEST(ScheduleTest, TraceDrivesEventTimes) {
  PreemptionModelParams p;
  p.distribution = TraceModel{"", {{0, 100}, {1, 50}, {0, 400}, {5, 10}}};
  p.notice_period_s = 10;
  p.respawn_delay_s = 5;
  SimulatedClock clock;
  FakeControl control;
  auto log = RunSchedule(p, {DatanodeId{1}, DatanodeId{2}}, &control, &clock,
                         std::chrono::hours(1));
  std::vector<std::pair<double, std::string>> seen;
  for (const auto& e : log) {
    seen.emplace_back(e.time_s, std::to_string(e.slot) + std::string(EventKindName(e.kind)));
  }
  std::vector<std::pair<double, std::string>> expected = {
      {50, "1notice"},  {60, "1terminate"},  {65, "1respawn"},
      {100, "0notice"}, {110, "0terminate"}, {115, "0respawn"},
      {400, "0notice"}, {410, "0terminate"}, {415, "0respawn"}};
  ASSERT_EQ(seen.size(), expected.size());
  for (size_t i = 0; i < seen.size(); ++i) {
    EXPECT_NEAR(seen[i].first, expected[i].first, 1e-9);
    EXPECT_EQ(seen[i].second, expected[i].second);
  }
}

TEST(ScheduleTest, StopFlagEndsRunEarly) {
  PreemptionModelParams p = Exponential(10, 1);
  std::atomic<bool> stop{true};
  FakeControl control;
  auto log = RunSchedule(p, {DatanodeId{1}}, &control, SystemClock::Get(),
                         std::chrono::hours(1000), nullptr, &stop);
  EXPECT_TRUE(log.empty());
}

}  // namespace
}  // namespace ess
