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

#include "ess/bench/sizing.h"

#include <cctype>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

namespace ess {
namespace {

// Splits "<number><unit>" and scales by the matching unit.
Result<double> ParseWithUnits(
    std::string_view text,
    const std::vector<std::pair<std::string_view, double>>& units,
    std::string_view what) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) return InvalidArgument("malformed " + std::string(what) + ": " + s);
  std::string unit(end);
  while (!unit.empty() && std::isspace(static_cast<unsigned char>(unit.front()))) {
    unit.erase(unit.begin());
  }
  for (const auto& [name, scale] : units) {
    if (unit == name) {
      if (!(v >= 0)) return InvalidArgument(std::string(what) + " must be >= 0");
      return v * scale;
    }
  }
  return InvalidArgument("unknown " + std::string(what) + " unit '" + unit + "'");
}

}  // namespace

double SizingTime(const SizingInput& in) {
  if (in.memory_bytes == 0) return 0;
  return in.memory_bytes * 8 / in.egress_bits_per_sec;
}

bool SizingFeasible(const SizingInput& in) {
  return SizingTime(in) <= in.notice_period_s;
}

double MaxCapacityBytes(double egress_bits_per_sec, double notice_period_s) {
  return egress_bits_per_sec * notice_period_s / 8;
}

Result<double> ParseBytes(std::string_view text) {
  static const std::vector<std::pair<std::string_view, double>> kUnits = {
      {"", 1},       {"B", 1},          {"KB", 1e3},       {"MB", 1e6},
      {"GB", 1e9},   {"TB", 1e12},      {"KiB", 1024.0},   {"MiB", 1048576.0},
      {"GiB", 1073741824.0}, {"TiB", 1099511627776.0}};
  return ParseWithUnits(text, kUnits, "size");
}

Result<double> ParseBitsPerSecond(std::string_view text) {
  static const std::vector<std::pair<std::string_view, double>> kUnits = {
      {"", 1},           {"bit", 1},         {"bit/s", 1},    {"bps", 1},
      {"Kbit", 1e3},     {"Kbit/s", 1e3},    {"Kbps", 1e3},
      {"Mbit", 1e6},     {"Mbit/s", 1e6},    {"Mbps", 1e6},
      {"Gbit", 1e9},     {"Gbit/s", 1e9},    {"Gbps", 1e9},
      {"Tbit", 1e12},    {"Tbit/s", 1e12},   {"Tbps", 1e12}};
  return ParseWithUnits(text, kUnits, "bandwidth");
}

Result<double> ParseSeconds(std::string_view text) {
  static const std::vector<std::pair<std::string_view, double>> kUnits = {
      {"", 1}, {"s", 1}, {"ms", 1e-3}, {"min", 60}, {"m", 60}, {"h", 3600}};
  return ParseWithUnits(text, kUnits, "duration");
}

}  // namespace ess
