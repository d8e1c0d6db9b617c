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

#ifndef ESS_PROTOCOL_CODEC_H_
#define ESS_PROTOCOL_CODEC_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ess/common/status.h"
#include "ess/protocol/messages.h"

namespace ess {

// Frame layout: [len: u32 BE][type: u8][payload: len bytes]. `len` counts the
// payload only, so a frame is always kFrameHeaderSize + len bytes.
inline constexpr size_t kFrameHeaderSize = 5;
inline constexpr uint64_t kMaxPayloadSize = (uint64_t{1} << 31) - 1;

struct FrameHeader {
  uint32_t payload_length = 0;
  uint8_t type = 0;
};

FrameHeader ParseFrameHeader(std::span<const uint8_t, kFrameHeaderSize> bytes);

Result<std::vector<uint8_t>> EncodeFrame(MessageType type,
                                         std::span<const uint8_t> payload);
Result<std::vector<uint8_t>> EncodeMessage(const Message& msg);

// `frame` must be exactly one complete frame.
Result<Message> DecodeMessage(std::span<const uint8_t> frame);
Result<Message> DecodePayload(uint8_t type, std::span<const uint8_t> payload);

}  // namespace ess

#endif  // ESS_PROTOCOL_CODEC_H_
