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

#ifndef ESS_PROTOCOL_MESSAGES_H_
#define ESS_PROTOCOL_MESSAGES_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ess/protocol/types.h"

namespace ess {

// Stable type bytes. Responses live in 0x80..0xFE; 0x7F is the error reply.
enum class MessageType : uint8_t {
  kRegister = 0x01,
  kHeartbeat = 0x02,
  kCreateObject = 0x03,
  kGetMetadata = 0x04,
  kAllocateBlock = 0x05,
  kCommitRelocation = 0x06,
  kListBlocksOnNode = 0x07,
  kBeginDrain = 0x08,
  kMarkLost = 0x09,
  kDeleteObject = 0x0A,
  kSealObject = 0x0B,
  kClusterStatus = 0x0C,

  kWriteBlock = 0x10,
  kReadBlock = 0x11,
  kDeleteBlock = 0x12,
  kEnterDraining = 0x13,
  kTerminate = 0x14,

  kPreemptionNotice = 0x20,

  kErrorResponse = 0x7F,

  kAck = 0x80,
  kRegisterResponse = 0x81,
  kObjectMetadataResponse = 0x83,
  kBlockDescriptorResponse = 0x85,
  kCommitRelocationResponse = 0x86,
  kBlockListResponse = 0x87,
  kLostReportResponse = 0x89,
  kClusterStatusResponse = 0x8C,
  kReadBlockResponse = 0x91,
};

// ---- namenode requests ----

struct RegisterRequest {
  static constexpr MessageType kType = MessageType::kRegister;
  uint8_t protocol_version = kProtocolVersion;
  std::string address;
  uint64_t capacity_blocks = 0;
  bool operator==(const RegisterRequest&) const = default;
};

struct HeartbeatRequest {
  static constexpr MessageType kType = MessageType::kHeartbeat;
  DatanodeId node;
  bool operator==(const HeartbeatRequest&) const = default;
};

// Creates an unsealed object of `size` bytes with every block placed.
struct CreateObjectRequest {
  static constexpr MessageType kType = MessageType::kCreateObject;
  std::string name;
  uint64_t size = 0;
  bool operator==(const CreateObjectRequest&) const = default;
};

struct GetMetadataRequest {
  static constexpr MessageType kType = MessageType::kGetMetadata;
  std::string name;
  bool operator==(const GetMetadataRequest&) const = default;
};

// With relocate_block == 0: replaces block `index` of an unsealed object with
// a fresh BlockId. Otherwise: reserves a destination for an existing block
// ahead of commit_relocation and echoes that BlockId back.
struct AllocateBlockRequest {
  static constexpr MessageType kType = MessageType::kAllocateBlock;
  std::string name;
  uint32_t index = 0;
  std::vector<DatanodeId> exclude;
  BlockId relocate_block;
  bool operator==(const AllocateBlockRequest&) const = default;
};

struct CommitRelocationRequest {
  static constexpr MessageType kType = MessageType::kCommitRelocation;
  BlockId block;
  DatanodeId new_node;
  uint64_t expected_version = 0;
  bool operator==(const CommitRelocationRequest&) const = default;
};

struct ListBlocksOnNodeRequest {
  static constexpr MessageType kType = MessageType::kListBlocksOnNode;
  DatanodeId node;
  bool operator==(const ListBlocksOnNodeRequest&) const = default;
};

struct BeginDrainRequest {
  static constexpr MessageType kType = MessageType::kBeginDrain;
  DatanodeId node;
  int64_t deadline_ms = 0;
  bool operator==(const BeginDrainRequest&) const = default;
};

// mark_node_terminated: the node's remaining blocks become Lost.
struct MarkLostRequest {
  static constexpr MessageType kType = MessageType::kMarkLost;
  DatanodeId node;
  bool operator==(const MarkLostRequest&) const = default;
};

// expected_version == 0 deletes unconditionally.
struct DeleteObjectRequest {
  static constexpr MessageType kType = MessageType::kDeleteObject;
  std::string name;
  uint64_t expected_version = 0;
  bool operator==(const DeleteObjectRequest&) const = default;
};

struct SealObjectRequest {
  static constexpr MessageType kType = MessageType::kSealObject;
  std::string name;
  bool operator==(const SealObjectRequest&) const = default;
};

struct ClusterStatusRequest {
  static constexpr MessageType kType = MessageType::kClusterStatus;
  bool operator==(const ClusterStatusRequest&) const = default;
};

// ---- datanode requests ----

struct WriteBlockRequest {
  static constexpr MessageType kType = MessageType::kWriteBlock;
  BlockId block;
  uint64_t offset = 0;
  std::vector<uint8_t> data;
  uint32_t crc = 0;
  bool operator==(const WriteBlockRequest&) const = default;
};

struct ReadBlockRequest {
  static constexpr MessageType kType = MessageType::kReadBlock;
  BlockId block;
  uint64_t offset = 0;
  uint64_t length = 0;
  bool operator==(const ReadBlockRequest&) const = default;
};

struct DeleteBlockRequest {
  static constexpr MessageType kType = MessageType::kDeleteBlock;
  BlockId block;
  bool operator==(const DeleteBlockRequest&) const = default;
};

struct EnterDrainingRequest {
  static constexpr MessageType kType = MessageType::kEnterDraining;
  int64_t deadline_ms = 0;
  bool operator==(const EnterDrainingRequest&) const = default;
};

struct TerminateRequest {
  static constexpr MessageType kType = MessageType::kTerminate;
  bool operator==(const TerminateRequest&) const = default;
};

// ---- relocator control ----

struct PreemptionNotice {
  static constexpr MessageType kType = MessageType::kPreemptionNotice;
  DatanodeId node;
  int64_t deadline_ms = 0;
  bool operator==(const PreemptionNotice&) const = default;
};

// ---- responses ----

struct ErrorResponse {
  static constexpr MessageType kType = MessageType::kErrorResponse;
  StatusCode code = StatusCode::kProtocolError;  // always a wire code
  std::string message;
  bool operator==(const ErrorResponse&) const = default;
};

struct Ack {
  static constexpr MessageType kType = MessageType::kAck;
  bool operator==(const Ack&) const = default;
};

struct RegisterResponse {
  static constexpr MessageType kType = MessageType::kRegisterResponse;
  DatanodeId node;
  uint64_t block_size = 0;
  bool operator==(const RegisterResponse&) const = default;
};

struct ObjectMetadataResponse {
  static constexpr MessageType kType = MessageType::kObjectMetadataResponse;
  ObjectMetadata metadata;
  bool operator==(const ObjectMetadataResponse&) const = default;
};

struct BlockDescriptorResponse {
  static constexpr MessageType kType = MessageType::kBlockDescriptorResponse;
  BlockDescriptor block;
  bool operator==(const BlockDescriptorResponse&) const = default;
};

struct CommitRelocationResponse {
  static constexpr MessageType kType = MessageType::kCommitRelocationResponse;
  uint64_t new_version = 0;
  bool operator==(const CommitRelocationResponse&) const = default;
};

struct BlockListResponse {
  static constexpr MessageType kType = MessageType::kBlockListResponse;
  std::vector<NodeBlock> blocks;
  bool operator==(const BlockListResponse&) const = default;
};

struct LostReportResponse {
  static constexpr MessageType kType = MessageType::kLostReportResponse;
  uint64_t lost_blocks = 0;
  bool operator==(const LostReportResponse&) const = default;
};

struct ClusterStatusResponse {
  static constexpr MessageType kType = MessageType::kClusterStatusResponse;
  uint64_t block_size = 0;
  std::vector<DatanodeInfo> nodes;
  bool operator==(const ClusterStatusResponse&) const = default;
};

struct ReadBlockResponse {
  static constexpr MessageType kType = MessageType::kReadBlockResponse;
  std::vector<uint8_t> data;
  uint32_t crc = 0;
  bool operator==(const ReadBlockResponse&) const = default;
};

using Message = std::variant<
    RegisterRequest, HeartbeatRequest, CreateObjectRequest, GetMetadataRequest,
    AllocateBlockRequest, CommitRelocationRequest, ListBlocksOnNodeRequest,
    BeginDrainRequest, MarkLostRequest, DeleteObjectRequest, SealObjectRequest,
    ClusterStatusRequest, WriteBlockRequest, ReadBlockRequest,
    DeleteBlockRequest, EnterDrainingRequest, TerminateRequest,
    PreemptionNotice, ErrorResponse, Ack, RegisterResponse,
    ObjectMetadataResponse, BlockDescriptorResponse, CommitRelocationResponse,
    BlockListResponse, LostReportResponse, ClusterStatusResponse,
    ReadBlockResponse>;

MessageType TypeOf(const Message& msg);
std::string_view MessageTypeName(MessageType type);

// Builds the reply for a failed request. Local-only codes are reported as
// ProtocolError since they have no wire representation.
ErrorResponse MakeErrorResponse(const Status& status);

}  // namespace ess

#endif  // ESS_PROTOCOL_MESSAGES_H_
