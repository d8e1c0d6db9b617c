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

#ifndef ESS_COMMON_CRC_H_
#define ESS_COMMON_CRC_H_

#include <cstdint>
#include <span>

namespace ess {

// CRC-32 (IEEE 802.3), as computed by zlib.
uint32_t Crc32(std::span<const uint8_t> data);

// CRC of A++B given crc(A), crc(B) and |B|.
uint32_t Crc32Combine(uint32_t crc_a, uint32_t crc_b, uint64_t len_b);

}  // namespace ess

#endif  // ESS_COMMON_CRC_H_
