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

#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>
#include <sys/socket.h>

#include "ess/protocol/codec.h"
#include "ess/protocol/net.h"
#include "ess/protocol/rpc.h"
#include "ess/protocol/types.h"

namespace ess {
namespace {

using Bytes = std::vector<uint8_t>;

void AppendBE(Bytes& out, uint64_t v, int width) {
  for (int i = width - 1; i >= 0; --i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

// ---- random message corpus ----

class Gen {
 public:
  explicit Gen(uint64_t seed) : rng_(seed) {}

  uint64_t U64() { return rng_(); }
  uint32_t U32() { return static_cast<uint32_t>(rng_()); }
  int64_t I64() { return static_cast<int64_t>(rng_()); }
  bool Bool() { return rng_() & 1; }
  size_t Small(size_t n) { return rng_() % (n + 1); }

  std::string Str() {
    static const char* kPieces[] = {"a", "b/", "zz", "\xC3\xA9", "\xE2\x82\xAC",
                                    "\xF0\x9F\x98\x80", "-", "0", "/x"};
    std::string s;
    for (size_t i = Small(6); i > 0; --i) s += kPieces[rng_() % 9];
    return s;
  }
  Bytes Data() {
    Bytes b(Small(40));
    for (auto& x : b) x = static_cast<uint8_t>(rng_());
    return b;
  }
  BlockDescriptor Block() {
    return {BlockId{U64()}, DatanodeId{U32()}, Str(), U64(), U32(), U64()};
  }
  ObjectMetadata Meta() {
    ObjectMetadata m{Str(), U64(), U64(), Bool(), {}};
    for (size_t i = Small(3); i > 0; --i) m.blocks.push_back(Block());
    return m;
  }
  DatanodeInfo Info() {
    return {DatanodeId{U32()}, Str(), U64(), U64(),
            static_cast<NodeState>(rng_() % 3), I64()};
  }
  std::vector<DatanodeId> Nodes() {
    std::vector<DatanodeId> v(Small(4));
    for (auto& n : v) n = DatanodeId{U32()};
    return v;
  }
  StatusCode WireCode() { return static_cast<StatusCode>(1 + rng_() % 8); }

  Message Any() {
    switch (rng_() % std::variant_size_v<Message>) {
      case 0: return RegisterRequest{static_cast<uint8_t>(U32()), Str(), U64()};
      case 1: return HeartbeatRequest{DatanodeId{U32()}};
      case 2: return CreateObjectRequest{Str(), U64()};
      case 3: return GetMetadataRequest{Str()};
      case 4: return AllocateBlockRequest{Str(), U32(), Nodes(), BlockId{U64()}};
      case 5: return CommitRelocationRequest{BlockId{U64()}, DatanodeId{U32()}, U64()};
      case 6: return ListBlocksOnNodeRequest{DatanodeId{U32()}};
      case 7: return BeginDrainRequest{DatanodeId{U32()}, I64()};
      case 8: return MarkLostRequest{DatanodeId{U32()}};
      case 9: return DeleteObjectRequest{Str(), U64()};
      case 10: return SealObjectRequest{Str()};
      case 11: return ClusterStatusRequest{};
      case 12: return WriteBlockRequest{BlockId{U64()}, U64(), Data(), U32()};
      case 13: return ReadBlockRequest{BlockId{U64()}, U64(), U64()};
      case 14: return DeleteBlockRequest{BlockId{U64()}};
      case 15: return EnterDrainingRequest{I64()};
      case 16: return TerminateRequest{};
      case 17: return PreemptionNotice{DatanodeId{U32()}, I64()};
      case 18: return ErrorResponse{WireCode(), Str()};
      case 19: return Ack{};
      case 20: return RegisterResponse{DatanodeId{U32()}, U64()};
      case 21: return ObjectMetadataResponse{Meta()};
      case 22: return BlockDescriptorResponse{Block()};
      case 23: return CommitRelocationResponse{U64()};
      case 24: {
        BlockListResponse r;
        for (size_t i = Small(3); i > 0; --i) r.blocks.push_back({Str(), Block()});
        return r;
      }
      case 25: return LostReportResponse{U64()};
      case 26: {
        ClusterStatusResponse r{U64(), {}};
        for (size_t i = Small(3); i > 0; --i) r.nodes.push_back(Info());
        return r;
      }
      default: return ReadBlockResponse{Data(), U32()};
    }
  }

 private:
  std::mt19937_64 rng_;
};

Bytes Encode(const Message& m) {
  auto r = EncodeMessage(m);
  EXPECT_TRUE(r.ok()) << r.status().ToString();
  return r.ok() ? r.value() : Bytes{};
}

// ---- types ----

TEST(ObjectNameTest, AcceptsPaths) {
  EXPECT_TRUE(ValidateObjectName("a").ok());
  EXPECT_TRUE(ValidateObjectName("shuffle/stage-1/part-0007").ok());
  EXPECT_TRUE(ValidateObjectName("caf\xC3\xA9/\xF0\x9F\x98\x80").ok());
  EXPECT_TRUE(ValidateObjectName(std::string(kMaxObjectNameBytes, 'x')).ok());
}

TEST(ObjectNameTest, RejectsMalformedNames) {
  for (const std::string& bad : std::vector<std::string>{"", "/a", "a/", "a//b", "./a", "a/..", "a/./b",
                          std::string("\xC3", 1), std::string("a\xFF"),
                          std::string("\xE2\x82", 2),
                          std::string(kMaxObjectNameBytes + 1, 'x')}) {
    EXPECT_FALSE(ValidateObjectName(bad).ok()) << bad;
  }
}

TEST(Utf8Test, RejectsOverlongAndSurrogates) {
  EXPECT_FALSE(IsValidUtf8(std::string("\xC0\xAF")));
  EXPECT_FALSE(IsValidUtf8(std::string("\xED\xA0\x80")));
  EXPECT_FALSE(IsValidUtf8(std::string("\xF4\x90\x80\x80")));
  EXPECT_TRUE(IsValidUtf8(std::string("\xF4\x8F\xBF\xBF")));
}

TEST(SplitIntoBlocksTest, LengthsSumToSize) {
  const uint64_t mib = 1 << 20;
  EXPECT_EQ(SplitIntoBlocks(mib * 5 / 2, mib),
            (std::vector<uint64_t>{mib, mib, mib / 2}));
  EXPECT_TRUE(SplitIntoBlocks(0, mib).empty());
  EXPECT_EQ(SplitIntoBlocks(mib, mib), (std::vector<uint64_t>{mib}));
  EXPECT_EQ(SplitIntoBlocks(1, mib), (std::vector<uint64_t>{1}));
}

TEST(NodeStateTest, OnlyForwardTransitions) {
  using S = NodeState;
  EXPECT_TRUE(IsAllowedTransition(S::kActive, S::kDraining));
  EXPECT_TRUE(IsAllowedTransition(S::kDraining, S::kTerminated));
  EXPECT_TRUE(IsAllowedTransition(S::kActive, S::kTerminated));
  EXPECT_FALSE(IsAllowedTransition(S::kDraining, S::kActive));
  EXPECT_FALSE(IsAllowedTransition(S::kTerminated, S::kActive));
  EXPECT_FALSE(IsAllowedTransition(S::kTerminated, S::kDraining));
}

// ---- codec ----

TEST(CodecTest, EmptyPayloadFrameIsFiveBytes) {
  EXPECT_EQ(Encode(Ack{}), (Bytes{0, 0, 0, 0, 0x80}));
  EXPECT_EQ(Encode(TerminateRequest{}), (Bytes{0, 0, 0, 0, 0x14}));
  EXPECT_EQ(Encode(ClusterStatusRequest{}), (Bytes{0, 0, 0, 0, 0x0C}));
}

TEST(CodecTest, ReadBlockRequestLayout) {
  Bytes expected;
  AppendBE(expected, 24, 4);
  expected.push_back(0x11);
  AppendBE(expected, 7, 8);
  AppendBE(expected, 0, 8);
  AppendBE(expected, 1024, 8);
  ReadBlockRequest req{BlockId{7}, 0, 1024};
  Bytes frame = Encode(req);
  EXPECT_EQ(frame, expected);
  auto back = DecodeMessage(frame);
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(std::get<ReadBlockRequest>(back.value()), req);
}

TEST(CodecTest, StableTypeBytes) {
  EXPECT_EQ(Encode(RegisterRequest{})[4], 0x01);
  EXPECT_EQ(Encode(HeartbeatRequest{})[4], 0x02);
  EXPECT_EQ(Encode(CreateObjectRequest{"a", 1})[4], 0x03);
  EXPECT_EQ(Encode(GetMetadataRequest{"a"})[4], 0x04);
  EXPECT_EQ(Encode(AllocateBlockRequest{})[4], 0x05);
  EXPECT_EQ(Encode(CommitRelocationRequest{})[4], 0x06);
  EXPECT_EQ(Encode(ListBlocksOnNodeRequest{})[4], 0x07);
  EXPECT_EQ(Encode(BeginDrainRequest{})[4], 0x08);
  EXPECT_EQ(Encode(MarkLostRequest{})[4], 0x09);
  EXPECT_EQ(Encode(DeleteObjectRequest{})[4], 0x0A);
  EXPECT_EQ(Encode(WriteBlockRequest{})[4], 0x10);
  EXPECT_EQ(Encode(ReadBlockRequest{})[4], 0x11);
  EXPECT_EQ(Encode(DeleteBlockRequest{})[4], 0x12);
  EXPECT_EQ(Encode(EnterDrainingRequest{})[4], 0x13);
  EXPECT_EQ(Encode(TerminateRequest{})[4], 0x14);
  EXPECT_EQ(Encode(ErrorResponse{StatusCode::kNotFound, ""})[4], 0x7F);
}

TEST(CodecTest, RandomCorpusRoundTripsAndEncodesInjectively) {
  Gen gen(20260101);
  std::map<Bytes, Message> seen;
  for (int i = 0; i < 10000; ++i) {
    Message m = gen.Any();
    Bytes frame = Encode(m);
    ASSERT_EQ(frame.size(), kFrameHeaderSize +
                                ParseFrameHeader(std::span<const uint8_t, 5>(
                                                     frame.data(), 5))
                                    .payload_length);
    ASSERT_EQ(Encode(m), frame) << "encoding is not deterministic";
    auto back = DecodeMessage(frame);
    ASSERT_TRUE(back.ok()) << i << " " << back.status().ToString();
    ASSERT_EQ(back.value(), m) << i << " " << MessageTypeName(TypeOf(m));
    auto [it, inserted] = seen.emplace(frame, m);
    if (!inserted) ASSERT_EQ(it->second, m) << "two messages share an encoding";
  }
}

TEST(CodecTest, RejectsShortInput) {
  Bytes three = {0, 0, 0};
  auto r = DecodeMessage(three);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.status().code(), StatusCode::kProtocolError);
}

TEST(CodecTest, RejectsUnknownType) {
  Bytes frame = {0, 0, 0, 0, 0xFF};
  auto r = DecodeMessage(frame);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.status().code(), StatusCode::kProtocolError);
}

TEST(CodecTest, RejectsTruncatedAndTrailingPayload) {
  Bytes frame = Encode(CreateObjectRequest{"obj", 42});
  // Length field disagrees with the bytes present.
  Bytes cut(frame.begin(), frame.end() - 1);
  EXPECT_EQ(DecodeMessage(cut).status().code(), StatusCode::kProtocolError);
  Bytes longer = frame;
  longer.push_back(0);
  EXPECT_EQ(DecodeMessage(longer).status().code(), StatusCode::kProtocolError);

  // Consistent framing, but the payload itself is short or long.
  Bytes payload(frame.begin() + 5, frame.end());
  Bytes short_payload(payload.begin(), payload.end() - 1);
  EXPECT_EQ(DecodePayload(0x03, short_payload).status().code(),
            StatusCode::kProtocolError);
  Bytes long_payload = payload;
  long_payload.push_back(9);
  EXPECT_EQ(DecodePayload(0x03, long_payload).status().code(),
            StatusCode::kProtocolError);
}

TEST(CodecTest, RejectsOutOfRangeFields) {
  // sealed flag sits after name(4) + size(8) + version(8).
  Bytes meta = Encode(ObjectMetadataResponse{ObjectMetadata{"", 0, 0, true, {}}});
  ASSERT_EQ(meta[5 + 20], 1);
  meta[5 + 20] = 2;
  EXPECT_EQ(DecodeMessage(meta).status().code(), StatusCode::kProtocolError);

  ClusterStatusResponse cs{1, {DatanodeInfo{DatanodeId{1}, "", 0, 0,
                                            NodeState::kTerminated, 0}}};
  Bytes status = Encode(cs);
  // block_size(8) + count(4) + id(4) + address(4) + capacity(8) + used(8)
  size_t state_at = 5 + 8 + 4 + 4 + 4 + 8 + 8;
  ASSERT_EQ(status[state_at], 2);
  status[state_at] = 3;
  EXPECT_EQ(DecodeMessage(status).status().code(), StatusCode::kProtocolError);

  Bytes err = Encode(ErrorResponse{StatusCode::kConflict, ""});
  err[5] = 0;  // code 0 is not an error code
  EXPECT_EQ(DecodeMessage(err).status().code(), StatusCode::kProtocolError);
  err[5] = 64;  // local-only codes never travel
  EXPECT_EQ(DecodeMessage(err).status().code(), StatusCode::kProtocolError);
}

TEST(CodecTest, RejectsInvalidUtf8Strings) {
  Bytes frame = Encode(GetMetadataRequest{"ab"});
  frame.back() = 0xFF;
  EXPECT_EQ(DecodeMessage(frame).status().code(), StatusCode::kProtocolError);
}

TEST(CodecTest, RejectsHugeVectorCounts) {
  Bytes frame;
  AppendBE(frame, 4, 4);
  frame.push_back(0x87);  // BlockListResponse with a count of 2^32-1
  AppendBE(frame, 0xFFFFFFFFu, 4);
  EXPECT_EQ(DecodeMessage(frame).status().code(), StatusCode::kProtocolError);
}

TEST(CodecTest, LocalCodesBecomeProtocolErrorsOnTheWire) {
  ErrorResponse e = MakeErrorResponse(Unavailable("down"));
  EXPECT_EQ(e.code, StatusCode::kProtocolError);
  EXPECT_EQ(MakeErrorResponse(NodeDraining("x")).code, StatusCode::kNodeDraining);
}

// ---- net / rpc ----

TEST(HostPortTest, Parse) {
  auto hp = ParseHostPort("127.0.0.1:9000");
  ASSERT_TRUE(hp.ok());
  EXPECT_EQ(hp.value().host, "127.0.0.1");
  EXPECT_EQ(hp.value().port, 9000);
  EXPECT_EQ(hp.value().ToString(), "127.0.0.1:9000");
  for (const char* bad : {"", "host", "host:", ":80", "h:99999", "h:12x"}) {
    EXPECT_EQ(ParseHostPort(bad).status().code(), StatusCode::kProtocolError)
        << bad;
  }
}

class EchoServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    server_ = std::make_unique<RpcServer>(
        [](const Message& m, const PeerInfo& peer) -> std::optional<Message> {
          if (const auto* g = std::get_if<GetMetadataRequest>(&m)) {
            if (g->name == "missing") {
              return MakeErrorResponse(NotFound("no " + g->name));
            }
            if (g->name == "slow") {
              std::this_thread::sleep_for(std::chrono::milliseconds(300));
            }
            if (g->name == "hangup") return std::nullopt;
            ObjectMetadata meta;
            meta.name = g->name;
            meta.sealed = peer.loopback;
            return ObjectMetadataResponse{meta};
          }
          return MakeErrorResponse(ProtocolError("unsupported"));
        });
    auto bound = server_->Start({"127.0.0.1", 0});
    ASSERT_TRUE(bound.ok()) << bound.status().ToString();
    address_ = bound.value().ToString();
  }

  std::unique_ptr<RpcServer> server_;
  std::string address_;
};

TEST_F(EchoServerTest, RequestResponse) {
  RpcClient client;
  for (int i = 0; i < 20; ++i) {
    auto r = client.CallAs<ObjectMetadataResponse>(address_,
                                                   GetMetadataRequest{"x/" + std::to_string(i)});
    ASSERT_TRUE(r.ok()) << r.status().ToString();
    EXPECT_EQ(r.value().metadata.name, "x/" + std::to_string(i));
    EXPECT_TRUE(r.value().metadata.sealed);  // loopback peer
  }
}

TEST_F(EchoServerTest, ErrorResponsesBecomeStatuses) {
  RpcClient client;
  auto r = client.Call(address_, GetMetadataRequest{"missing"});
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.status().code(), StatusCode::kNotFound);
  auto wrong = client.CallAs<Ack>(address_, GetMetadataRequest{"x"});
  EXPECT_EQ(wrong.status().code(), StatusCode::kProtocolError);
}

TEST_F(EchoServerTest, DeadlineExceeded) {
  RpcClient client;
  auto r = client.Call(address_, GetMetadataRequest{"slow"},
                       std::chrono::steady_clock::now() + std::chrono::milliseconds(50));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.status().code(), StatusCode::kDeadlineExceeded);
  // The pool does not hand out the abandoned connection.
  auto ok = client.Call(address_, GetMetadataRequest{"x"});
  EXPECT_TRUE(ok.ok()) << ok.status().ToString();
}

TEST_F(EchoServerTest, HangupIsUnavailable) {
  RpcClient client;
  auto r = client.Call(address_, GetMetadataRequest{"hangup"});
  EXPECT_EQ(r.status().code(), StatusCode::kUnavailable);
}

TEST_F(EchoServerTest, PipelinedRequestsAreAnsweredInOrder) {
  auto sock = ConnectTo(ParseHostPort(address_).value(), std::nullopt);
  ASSERT_TRUE(sock.ok());
  for (int i = 0; i < 5; ++i) {
    ASSERT_TRUE(WriteMessage(sock.value().fd(), GetMetadataRequest{std::to_string(i)},
                             std::nullopt)
                    .ok());
  }
  for (int i = 0; i < 5; ++i) {
    auto reply = ReadMessage(sock.value().fd(), std::nullopt);
    ASSERT_TRUE(reply.ok());
    EXPECT_EQ(std::get<ObjectMetadataResponse>(reply.value()).metadata.name,
              std::to_string(i));
  }
}

TEST_F(EchoServerTest, GarbageGetsProtocolErrorThenClose) {
  auto sock = ConnectTo(ParseHostPort(address_).value(), std::nullopt);
  ASSERT_TRUE(sock.ok());
  uint8_t junk[] = {0, 0, 0, 1, 0xFF, 0};
  ASSERT_EQ(::send(sock.value().fd(), junk, sizeof(junk), MSG_NOSIGNAL),
            static_cast<ssize_t>(sizeof(junk)));
  auto reply = ReadMessage(sock.value().fd(),
                           std::chrono::steady_clock::now() + std::chrono::seconds(2));
  ASSERT_TRUE(reply.ok()) << reply.status().ToString();
  EXPECT_EQ(std::get<ErrorResponse>(reply.value()).code, StatusCode::kProtocolError);
  auto closed = ReadMessage(sock.value().fd(),
                            std::chrono::steady_clock::now() + std::chrono::seconds(2));
  EXPECT_FALSE(closed.ok());
}

TEST_F(EchoServerTest, ShutdownRefusesNewCalls) {
  RpcClient client;
  ASSERT_TRUE(client.Call(address_, GetMetadataRequest{"x"}).ok());
  server_->Shutdown();
  auto r = client.Call(address_, GetMetadataRequest{"x"});
  EXPECT_EQ(r.status().code(), StatusCode::kUnavailable);
}

TEST(RpcClientTest, UnreachableAddress) {
  RpcClient client;
  auto listener = ListenOn({"127.0.0.1", 0});
  ASSERT_TRUE(listener.ok());
  std::string addr = LocalAddress(listener.value().fd()).value().ToString();
  listener.value().Close();
  EXPECT_EQ(client.Call(addr, Ack{}).status().code(), StatusCode::kUnavailable);
}

}  // namespace
}  // namespace ess
