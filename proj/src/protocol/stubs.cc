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

#include "ess/protocol/stubs.h"

namespace ess {

Result<RegisterResponse> NamenodeStub::Register(
    const std::string& datanode_address, uint64_t capacity_blocks) {
  RegisterRequest req;
  req.address = datanode_address;
  req.capacity_blocks = capacity_blocks;
  return rpc_->CallAs<RegisterResponse>(address_, req);
}

Status NamenodeStub::Heartbeat(DatanodeId node) {
  return rpc_->CallAs<Ack>(address_, HeartbeatRequest{node}).status();
}

Result<ObjectMetadata> NamenodeStub::CreateObject(const std::string& name,
                                                  uint64_t size) {
  ESS_ASSIGN_OR_RETURN(auto r, rpc_->CallAs<ObjectMetadataResponse>(
                                   address_, CreateObjectRequest{name, size}));
  return std::move(r.metadata);
}

Result<ObjectMetadata> NamenodeStub::SealObject(const std::string& name) {
  ESS_ASSIGN_OR_RETURN(auto r, rpc_->CallAs<ObjectMetadataResponse>(
                                   address_, SealObjectRequest{name}));
  return std::move(r.metadata);
}

Result<ObjectMetadata> NamenodeStub::GetMetadata(const std::string& name) {
  ESS_ASSIGN_OR_RETURN(auto r, rpc_->CallAs<ObjectMetadataResponse>(
                                   address_, GetMetadataRequest{name}));
  return std::move(r.metadata);
}

Result<BlockDescriptor> NamenodeStub::AllocateBlock(
    const std::string& name, uint32_t index, std::vector<DatanodeId> exclude) {
  AllocateBlockRequest req{name, index, std::move(exclude), BlockId{0}};
  ESS_ASSIGN_OR_RETURN(auto r,
                       rpc_->CallAs<BlockDescriptorResponse>(address_, req));
  return std::move(r.block);
}

Result<BlockDescriptor> NamenodeStub::ReserveRelocationTarget(
    const std::string& name, BlockId block, std::vector<DatanodeId> exclude) {
  AllocateBlockRequest req{name, 0, std::move(exclude), block};
  ESS_ASSIGN_OR_RETURN(auto r,
                       rpc_->CallAs<BlockDescriptorResponse>(address_, req));
  return std::move(r.block);
}

Result<uint64_t> NamenodeStub::CommitRelocation(BlockId block,
                                                DatanodeId new_node,
                                                uint64_t expected_version) {
  ESS_ASSIGN_OR_RETURN(
      auto r, rpc_->CallAs<CommitRelocationResponse>(
                  address_,
                  CommitRelocationRequest{block, new_node, expected_version}));
  return r.new_version;
}

Result<std::vector<NodeBlock>> NamenodeStub::ListBlocksOnNode(DatanodeId node) {
  ESS_ASSIGN_OR_RETURN(auto r, rpc_->CallAs<BlockListResponse>(
                                   address_, ListBlocksOnNodeRequest{node}));
  return std::move(r.blocks);
}

Status NamenodeStub::BeginDrain(DatanodeId node, TimePoint deadline) {
  return rpc_
      ->CallAs<Ack>(address_, BeginDrainRequest{node, ToWireMillis(deadline)})
      .status();
}

Result<uint64_t> NamenodeStub::MarkNodeTerminated(DatanodeId node) {
  ESS_ASSIGN_OR_RETURN(auto r, rpc_->CallAs<LostReportResponse>(
                                   address_, MarkLostRequest{node}));
  return r.lost_blocks;
}

Status NamenodeStub::DeleteObject(const std::string& name,
                                  uint64_t expected_version) {
  return rpc_
      ->CallAs<Ack>(address_, DeleteObjectRequest{name, expected_version})
      .status();
}

Result<ClusterStatusResponse> NamenodeStub::ClusterStatus() {
  return rpc_->CallAs<ClusterStatusResponse>(address_, ClusterStatusRequest{});
}

Status DatanodeStub::WriteBlock(const std::string& address, BlockId block,
                                uint64_t offset, std::vector<uint8_t> data,
                                uint32_t crc, Deadline deadline) {
  WriteBlockRequest req{block, offset, std::move(data), crc};
  return rpc_->CallAs<Ack>(address, req, deadline).status();
}

Result<ReadBlockResponse> DatanodeStub::ReadBlock(const std::string& address,
                                                  BlockId block,
                                                  uint64_t offset,
                                                  uint64_t length,
                                                  Deadline deadline) {
  return rpc_->CallAs<ReadBlockResponse>(
      address, ReadBlockRequest{block, offset, length}, deadline);
}

Status DatanodeStub::DeleteBlock(const std::string& address, BlockId block,
                                 Deadline deadline) {
  return rpc_->CallAs<Ack>(address, DeleteBlockRequest{block}, deadline)
      .status();
}

Status DatanodeStub::EnterDraining(const std::string& address,
                                   TimePoint deadline) {
  return rpc_
      ->CallAs<Ack>(address, EnterDrainingRequest{ToWireMillis(deadline)})
      .status();
}

Status DatanodeStub::Terminate(const std::string& address) {
  Result<Message> reply =
      rpc_->Call(address, TerminateRequest{},
                 std::chrono::steady_clock::now() + std::chrono::seconds(5));
  rpc_->DropConnections(address);
  if (reply.ok() || reply.status().code() == StatusCode::kUnavailable) {
    return Status::Ok();
  }
  return reply.status();
}

Status RelocatorStub::Notify(DatanodeId node, TimePoint deadline) {
  return rpc_
      ->CallAs<Ack>(address_, PreemptionNotice{node, ToWireMillis(deadline)})
      .status();
}

}  // namespace ess
