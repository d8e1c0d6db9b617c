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

#include "ess/protocol/codec.h"

#include <cstring>
#include <string>
#include <type_traits>
#include <utility>

namespace ess {
namespace {

class Writer {
 public:
  void U8(uint8_t v) { out_.push_back(v); }
  void U32(uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) U8(uint8_t(v >> shift));
  }
  void U64(uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) U8(uint8_t(v >> shift));
  }
  void I64(int64_t v) { U64(static_cast<uint64_t>(v)); }
  void Bool(bool v) { U8(v ? 1 : 0); }
  void Bytes(std::span<const uint8_t> v) {
    U32(static_cast<uint32_t>(v.size()));
    out_.insert(out_.end(), v.begin(), v.end());
  }
  void Str(const std::string& s) {
    Bytes({reinterpret_cast<const uint8_t*>(s.data()), s.size()});
  }
  void Node(DatanodeId id) { U32(id.value); }
  void Block(BlockId id) { U64(id.value); }

  std::vector<uint8_t> Take() { return std::move(out_); }

 private:
  std::vector<uint8_t> out_;
};

// Bounds-checked reader. After the first failure every accessor returns a
// zero value and ok() stays false.
class Reader {
 public:
  explicit Reader(std::span<const uint8_t> in) : in_(in) {}

  bool ok() const { return ok_; }
  bool AtEnd() const { return pos_ == in_.size(); }
  void Fail() { ok_ = false; }

  uint8_t U8() {
    if (!Need(1)) return 0;
    return in_[pos_++];
  }
  uint32_t U32() {
    if (!Need(4)) return 0;
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | in_[pos_++];
    return v;
  }
  uint64_t U64() {
    if (!Need(8)) return 0;
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | in_[pos_++];
    return v;
  }
  int64_t I64() { return static_cast<int64_t>(U64()); }
  bool Bool() {
    uint8_t v = U8();
    if (v > 1) Fail();
    return v == 1;
  }
  std::vector<uint8_t> Bytes() {
    uint32_t n = U32();
    if (!Need(n)) return {};
    std::vector<uint8_t> v(in_.begin() + pos_, in_.begin() + pos_ + n);
    pos_ += n;
    return v;
  }
  std::string Str() {
    uint32_t n = U32();
    if (!Need(n)) return {};
    std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
    pos_ += n;
    if (!IsValidUtf8(s)) Fail();
    return s;
  }
  DatanodeId Node() { return DatanodeId{U32()}; }
  BlockId Block() { return BlockId{U64()}; }
  // Element counts are bounded by the remaining input to stop a hostile
  // count from reserving huge vectors.
  uint32_t Count(size_t min_element_size) {
    uint32_t n = U32();
    if (ok_ && uint64_t(n) * min_element_size > in_.size() - pos_) Fail();
    return ok_ ? n : 0;
  }

 private:
  bool Need(size_t n) {
    if (!ok_ || in_.size() - pos_ < n) {
      ok_ = false;
      return false;
    }
    return true;
  }

  std::span<const uint8_t> in_;
  size_t pos_ = 0;
  bool ok_ = true;
};

void Put(Writer& w, const BlockDescriptor& b) {
  w.Block(b.block_id);
  w.Node(b.datanode);
  w.Str(b.address);
  w.U64(b.length);
  w.U32(b.index);
  w.U64(b.version);
}

void Get(Reader& r, BlockDescriptor& b) {
  b.block_id = r.Block();
  b.datanode = r.Node();
  b.address = r.Str();
  b.length = r.U64();
  b.index = r.U32();
  b.version = r.U64();
}

constexpr size_t kMinBlockDescriptorSize = 8 + 4 + 4 + 8 + 4 + 8;

void Put(Writer& w, const ObjectMetadata& m) {
  w.Str(m.name);
  w.U64(m.size);
  w.U64(m.version);
  w.Bool(m.sealed);
  w.U32(static_cast<uint32_t>(m.blocks.size()));
  for (const auto& b : m.blocks) Put(w, b);
}

void Get(Reader& r, ObjectMetadata& m) {
  m.name = r.Str();
  m.size = r.U64();
  m.version = r.U64();
  m.sealed = r.Bool();
  m.blocks.resize(r.Count(kMinBlockDescriptorSize));
  for (auto& b : m.blocks) Get(r, b);
}

void Put(Writer& w, const DatanodeInfo& n) {
  w.Node(n.id);
  w.Str(n.address);
  w.U64(n.capacity_blocks);
  w.U64(n.used_blocks);
  w.U8(static_cast<uint8_t>(n.state));
  w.I64(n.deadline_ms);
}

void Get(Reader& r, DatanodeInfo& n) {
  n.id = r.Node();
  n.address = r.Str();
  n.capacity_blocks = r.U64();
  n.used_blocks = r.U64();
  uint8_t state = r.U8();
  if (state > static_cast<uint8_t>(NodeState::kTerminated)) r.Fail();
  n.state = static_cast<NodeState>(state);
  n.deadline_ms = r.I64();
}

// Per-message payload codecs. Each Put/Get pair must mirror field order.

void Put(Writer& w, const RegisterRequest& m) {
  w.U8(m.protocol_version);
  w.Str(m.address);
  w.U64(m.capacity_blocks);
}
void Get(Reader& r, RegisterRequest& m) {
  m.protocol_version = r.U8();
  m.address = r.Str();
  m.capacity_blocks = r.U64();
}

void Put(Writer& w, const HeartbeatRequest& m) { w.Node(m.node); }
void Get(Reader& r, HeartbeatRequest& m) { m.node = r.Node(); }

void Put(Writer& w, const CreateObjectRequest& m) {
  w.Str(m.name);
  w.U64(m.size);
}
void Get(Reader& r, CreateObjectRequest& m) {
  m.name = r.Str();
  m.size = r.U64();
}

void Put(Writer& w, const GetMetadataRequest& m) { w.Str(m.name); }
void Get(Reader& r, GetMetadataRequest& m) { m.name = r.Str(); }

void Put(Writer& w, const AllocateBlockRequest& m) {
  w.Str(m.name);
  w.U32(m.index);
  w.U32(static_cast<uint32_t>(m.exclude.size()));
  for (auto id : m.exclude) w.Node(id);
  w.Block(m.relocate_block);
}
void Get(Reader& r, AllocateBlockRequest& m) {
  m.name = r.Str();
  m.index = r.U32();
  m.exclude.resize(r.Count(4));
  for (auto& id : m.exclude) id = r.Node();
  m.relocate_block = r.Block();
}

void Put(Writer& w, const CommitRelocationRequest& m) {
  w.Block(m.block);
  w.Node(m.new_node);
  w.U64(m.expected_version);
}
void Get(Reader& r, CommitRelocationRequest& m) {
  m.block = r.Block();
  m.new_node = r.Node();
  m.expected_version = r.U64();
}

void Put(Writer& w, const ListBlocksOnNodeRequest& m) { w.Node(m.node); }
void Get(Reader& r, ListBlocksOnNodeRequest& m) { m.node = r.Node(); }

void Put(Writer& w, const BeginDrainRequest& m) {
  w.Node(m.node);
  w.I64(m.deadline_ms);
}
void Get(Reader& r, BeginDrainRequest& m) {
  m.node = r.Node();
  m.deadline_ms = r.I64();
}

void Put(Writer& w, const MarkLostRequest& m) { w.Node(m.node); }
void Get(Reader& r, MarkLostRequest& m) { m.node = r.Node(); }

void Put(Writer& w, const DeleteObjectRequest& m) {
  w.Str(m.name);
  w.U64(m.expected_version);
}
void Get(Reader& r, DeleteObjectRequest& m) {
  m.name = r.Str();
  m.expected_version = r.U64();
}

void Put(Writer& w, const SealObjectRequest& m) { w.Str(m.name); }
void Get(Reader& r, SealObjectRequest& m) { m.name = r.Str(); }

void Put(Writer&, const ClusterStatusRequest&) {}
void Get(Reader&, ClusterStatusRequest&) {}

void Put(Writer& w, const WriteBlockRequest& m) {
  w.Block(m.block);
  w.U64(m.offset);
  w.Bytes(m.data);
  w.U32(m.crc);
}
void Get(Reader& r, WriteBlockRequest& m) {
  m.block = r.Block();
  m.offset = r.U64();
  m.data = r.Bytes();
  m.crc = r.U32();
}

void Put(Writer& w, const ReadBlockRequest& m) {
  w.Block(m.block);
  w.U64(m.offset);
  w.U64(m.length);
}
void Get(Reader& r, ReadBlockRequest& m) {
  m.block = r.Block();
  m.offset = r.U64();
  m.length = r.U64();
}

void Put(Writer& w, const DeleteBlockRequest& m) { w.Block(m.block); }
void Get(Reader& r, DeleteBlockRequest& m) { m.block = r.Block(); }

void Put(Writer& w, const EnterDrainingRequest& m) { w.I64(m.deadline_ms); }
void Get(Reader& r, EnterDrainingRequest& m) { m.deadline_ms = r.I64(); }

void Put(Writer&, const TerminateRequest&) {}
void Get(Reader&, TerminateRequest&) {}

void Put(Writer& w, const PreemptionNotice& m) {
  w.Node(m.node);
  w.I64(m.deadline_ms);
}
void Get(Reader& r, PreemptionNotice& m) {
  m.node = r.Node();
  m.deadline_ms = r.I64();
}

void Put(Writer& w, const ErrorResponse& m) {
  w.U8(static_cast<uint8_t>(m.code));
  w.Str(m.message);
}
void Get(Reader& r, ErrorResponse& m) {
  m.code = static_cast<StatusCode>(r.U8());
  if (!IsWireCode(m.code)) r.Fail();
  m.message = r.Str();
}

void Put(Writer&, const Ack&) {}
void Get(Reader&, Ack&) {}

void Put(Writer& w, const RegisterResponse& m) {
  w.Node(m.node);
  w.U64(m.block_size);
}
void Get(Reader& r, RegisterResponse& m) {
  m.node = r.Node();
  m.block_size = r.U64();
}

void Put(Writer& w, const ObjectMetadataResponse& m) { Put(w, m.metadata); }
void Get(Reader& r, ObjectMetadataResponse& m) { Get(r, m.metadata); }

void Put(Writer& w, const BlockDescriptorResponse& m) { Put(w, m.block); }
void Get(Reader& r, BlockDescriptorResponse& m) { Get(r, m.block); }

void Put(Writer& w, const CommitRelocationResponse& m) {
  w.U64(m.new_version);
}
void Get(Reader& r, CommitRelocationResponse& m) { m.new_version = r.U64(); }

void Put(Writer& w, const BlockListResponse& m) {
  w.U32(static_cast<uint32_t>(m.blocks.size()));
  for (const auto& e : m.blocks) {
    w.Str(e.object);
    Put(w, e.block);
  }
}
void Get(Reader& r, BlockListResponse& m) {
  m.blocks.resize(r.Count(4 + kMinBlockDescriptorSize));
  for (auto& e : m.blocks) {
    e.object = r.Str();
    Get(r, e.block);
  }
}

void Put(Writer& w, const LostReportResponse& m) { w.U64(m.lost_blocks); }
void Get(Reader& r, LostReportResponse& m) { m.lost_blocks = r.U64(); }

void Put(Writer& w, const ClusterStatusResponse& m) {
  w.U64(m.block_size);
  w.U32(static_cast<uint32_t>(m.nodes.size()));
  for (const auto& n : m.nodes) Put(w, n);
}
void Get(Reader& r, ClusterStatusResponse& m) {
  m.block_size = r.U64();
  m.nodes.resize(r.Count(4 + 4 + 8 + 8 + 1 + 8));
  for (auto& n : m.nodes) Get(r, n);
}

void Put(Writer& w, const ReadBlockResponse& m) {
  w.Bytes(m.data);
  w.U32(m.crc);
}
void Get(Reader& r, ReadBlockResponse& m) {
  m.data = r.Bytes();
  m.crc = r.U32();
}

template <size_t I = 0>
Result<Message> DecodeAlternative(uint8_t type, Reader& r) {
  if constexpr (I == std::variant_size_v<Message>) {
    return ProtocolError("unknown message type " + std::to_string(type));
  } else {
    using T = std::variant_alternative_t<I, Message>;
    if (static_cast<uint8_t>(T::kType) != type) {
      return DecodeAlternative<I + 1>(type, r);
    }
    T msg;
    Get(r, msg);
    if (!r.ok()) return ProtocolError("truncated or malformed payload");
    if (!r.AtEnd()) return ProtocolError("trailing bytes after payload");
    return Message(std::move(msg));
  }
}

}  // namespace

FrameHeader ParseFrameHeader(std::span<const uint8_t, kFrameHeaderSize> b) {
  FrameHeader h;
  h.payload_length = (uint32_t(b[0]) << 24) | (uint32_t(b[1]) << 16) |
                     (uint32_t(b[2]) << 8) | uint32_t(b[3]);
  h.type = b[4];
  return h;
}

Result<std::vector<uint8_t>> EncodeFrame(MessageType type,
                                         std::span<const uint8_t> payload) {
  if (payload.size() > kMaxPayloadSize) {
    return ProtocolError("payload of " + std::to_string(payload.size()) +
                         " bytes exceeds the frame limit");
  }
  std::vector<uint8_t> frame;
  frame.reserve(kFrameHeaderSize + payload.size());
  auto len = static_cast<uint32_t>(payload.size());
  frame.push_back(uint8_t(len >> 24));
  frame.push_back(uint8_t(len >> 16));
  frame.push_back(uint8_t(len >> 8));
  frame.push_back(uint8_t(len));
  frame.push_back(static_cast<uint8_t>(type));
  frame.insert(frame.end(), payload.begin(), payload.end());
  return frame;
}

Result<std::vector<uint8_t>> EncodeMessage(const Message& msg) {
  Writer w;
  std::visit([&w](const auto& m) { Put(w, m); }, msg);
  std::vector<uint8_t> payload = w.Take();
  return EncodeFrame(TypeOf(msg), payload);
}

Result<Message> DecodeMessage(std::span<const uint8_t> frame) {
  if (frame.size() < kFrameHeaderSize) {
    return ProtocolError("frame shorter than its 5-byte header");
  }
  FrameHeader h = ParseFrameHeader(frame.first<kFrameHeaderSize>());
  std::span<const uint8_t> payload = frame.subspan(kFrameHeaderSize);
  if (payload.size() < h.payload_length) {
    return ProtocolError("truncated frame");
  }
  if (payload.size() > h.payload_length) {
    return ProtocolError("trailing bytes after frame");
  }
  return DecodePayload(h.type, payload);
}

Result<Message> DecodePayload(uint8_t type, std::span<const uint8_t> payload) {
  Reader r(payload);
  return DecodeAlternative(type, r);
}

MessageType TypeOf(const Message& msg) {
  return std::visit(
      [](const auto& m) { return std::decay_t<decltype(m)>::kType; }, msg);
}

std::string_view MessageTypeName(MessageType type) {
  switch (type) {
    case MessageType::kRegister: return "Register";
    case MessageType::kHeartbeat: return "Heartbeat";
    case MessageType::kCreateObject: return "CreateObject";
    case MessageType::kGetMetadata: return "GetMetadata";
    case MessageType::kAllocateBlock: return "AllocateBlock";
    case MessageType::kCommitRelocation: return "CommitRelocation";
    case MessageType::kListBlocksOnNode: return "ListBlocksOnNode";
    case MessageType::kBeginDrain: return "BeginDrain";
    case MessageType::kMarkLost: return "MarkLost";
    case MessageType::kDeleteObject: return "DeleteObject";
    case MessageType::kSealObject: return "SealObject";
    case MessageType::kClusterStatus: return "ClusterStatus";
    case MessageType::kWriteBlock: return "WriteBlock";
    case MessageType::kReadBlock: return "ReadBlock";
    case MessageType::kDeleteBlock: return "DeleteBlock";
    case MessageType::kEnterDraining: return "EnterDraining";
    case MessageType::kTerminate: return "Terminate";
    case MessageType::kPreemptionNotice: return "PreemptionNotice";
    case MessageType::kErrorResponse: return "ErrorResponse";
    case MessageType::kAck: return "Ack";
    case MessageType::kRegisterResponse: return "RegisterResponse";
    case MessageType::kObjectMetadataResponse: return "ObjectMetadataResponse";
    case MessageType::kBlockDescriptorResponse:
      return "BlockDescriptorResponse";
    case MessageType::kCommitRelocationResponse:
      return "CommitRelocationResponse";
    case MessageType::kBlockListResponse: return "BlockListResponse";
    case MessageType::kLostReportResponse: return "LostReportResponse";
    case MessageType::kClusterStatusResponse: return "ClusterStatusResponse";
    case MessageType::kReadBlockResponse: return "ReadBlockResponse";
  }
  return "Unknown";
}

ErrorResponse MakeErrorResponse(const Status& status) {
  ErrorResponse err;
  err.code = IsWireCode(status.code()) ? status.code()
                                       : StatusCode::kProtocolError;
  err.message = status.message();
  return err;
}

}  // namespace ess
