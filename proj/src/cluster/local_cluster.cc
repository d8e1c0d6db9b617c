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

#include "ess/cluster/local_cluster.h"

namespace ess {

LocalCluster::LocalCluster(LocalClusterOptions options)
    : options_(std::move(options)) {}

LocalCluster::~LocalCluster() {
  if (relocator_) relocator_->Stop();
  relocator_.reset();
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (auto& [id, node] : datanodes_) node->Terminate();
    datanodes_.clear();
  }
  if (namenode_) namenode_->Stop();
}

Result<std::unique_ptr<LocalCluster>> LocalCluster::Start(
    LocalClusterOptions options) {
  std::unique_ptr<LocalCluster> c(new LocalCluster(std::move(options)));
  c->namenode_ = std::make_unique<NamenodeService>(c->options_.namenode);
  ESS_ASSIGN_OR_RETURN(HostPort nn, c->namenode_->Start({c->options_.host, 0}));
  c->namenode_address_ = nn.ToString();
  if (c->options_.with_relocator) {
    RelocatorOptions ro = c->options_.relocator;
    ro.namenode_address = c->namenode_address_;
    c->relocator_ = std::make_unique<Relocator>(ro);
    ESS_ASSIGN_OR_RETURN(HostPort rl, c->relocator_->Start({c->options_.host, 0}));
    c->relocator_address_ = rl.ToString();
  }
  for (size_t i = 0; i < c->options_.datanodes; ++i) {
    ESS_RETURN_IF_ERROR(c->AddDatanode().status());
  }
  return c;
}

Result<DatanodeId> LocalCluster::AddDatanode(
    std::optional<DatanodeOptions> options) {
  DatanodeOptions o = options.value_or(options_.datanode);
  o.namenode_address = namenode_address_;
  auto node = std::make_unique<Datanode>(o);
  ESS_RETURN_IF_ERROR(node->Start({options_.host, 0}).status());
  DatanodeId id = node->id();
  std::lock_guard<std::mutex> lock(mu_);
  datanodes_[id] = std::move(node);
  return id;
}

Datanode* LocalCluster::datanode(DatanodeId id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = datanodes_.find(id);
  return it == datanodes_.end() ? nullptr : it->second.get();
}

std::vector<DatanodeId> LocalCluster::live_datanodes() {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<DatanodeId> out;
  for (const auto& [id, node] : datanodes_) {
    if (node->state() != NodeState::kTerminated) out.push_back(id);
  }
  return out;
}

Status LocalCluster::Notice(uint32_t slot, DatanodeId node, TimePoint deadline) {
  Status result;
  if (Datanode* d = datanode(node)) {
    Status s = d->EnterDraining(deadline);
    if (!s.ok() && s.code() != StatusCode::kConflict) result = s;
  } else {
    result = NotFound("no such datanode");
  }
  if (relocator_) {
    Status s = relocator_->Notify(node, deadline);
    if (!s.ok() && s.code() != StatusCode::kConflict && result.ok()) result = s;
  }
  return result;
}

Status LocalCluster::Terminate(uint32_t slot, DatanodeId node) {
  if (Datanode* d = datanode(node)) d->Terminate();
  auto marked = namenode().MarkNodeTerminated(node);
  if (!marked.ok() && marked.status().code() != StatusCode::kConflict) {
    return marked.status();
  }
  return Status::Ok();
}

Result<DatanodeId> LocalCluster::Respawn(uint32_t slot) { return AddDatanode(); }

}  // namespace ess
