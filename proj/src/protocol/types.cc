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

#include "ess/protocol/types.h"

#include <algorithm>

namespace ess {

bool IsValidUtf8(std::string_view s) {
  size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    size_t extra;
    uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (size_t k = 1; k <= extra; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range code points.
    static constexpr uint32_t kMin[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
      return false;
    i += extra + 1;
  }
  return true;
}

Status ValidateObjectName(std::string_view name) {
  if (name.empty()) return InvalidArgument("object name is empty");
  if (name.size() > kMaxObjectNameBytes) {
    return InvalidArgument("object name exceeds 4096 bytes");
  }
  if (!IsValidUtf8(name)) return InvalidArgument("object name is not UTF-8");
  size_t start = 0;
  while (true) {
    size_t end = name.find('/', start);
    std::string_view segment = name.substr(
        start, end == std::string_view::npos ? std::string_view::npos
                                             : end - start);
    if (segment.empty()) {
      return InvalidArgument("object name has an empty path segment");
    }
    if (segment == "." || segment == "..") {
      return InvalidArgument("object name has a '.' or '..' segment");
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return Status::Ok();
}

std::string_view NodeStateName(NodeState state) {
  switch (state) {
    case NodeState::kActive: return "Active";
    case NodeState::kDraining: return "Draining";
    case NodeState::kTerminated: return "Terminated";
  }
  return "Unknown";
}

bool IsAllowedTransition(NodeState from, NodeState to) {
  return (from == NodeState::kActive && to == NodeState::kDraining) ||
         (from == NodeState::kDraining && to == NodeState::kTerminated) ||
         (from == NodeState::kActive && to == NodeState::kTerminated);
}

std::vector<uint64_t> SplitIntoBlocks(uint64_t size, uint64_t block_size) {
  std::vector<uint64_t> lengths;
  for (uint64_t off = 0; off < size; off += block_size) {
    lengths.push_back(std::min(block_size, size - off));
  }
  return lengths;
}

}  // namespace ess
