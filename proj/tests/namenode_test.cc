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
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "ess/namenode/namenode.h"
#include "ess/namenode/namenode_service.h"
#include "ess/protocol/stubs.h"

namespace ess {
namespace {

NamenodeConfig SmallBlocks(uint64_t block_size = 4) {
  NamenodeConfig c;
  c.block_size = block_size;
  return c;
}

std::string Addr(int i) { return "127.0.0.1:" + std::to_string(20000 + i); }

std::vector<DatanodeId> RegisterN(Namenode& nn, int n, uint64_t capacity) {
  std::vector<DatanodeId> ids;
  for (int i = 0; i < n; ++i) ids.push_back(nn.RegisterDatanode(Addr(i), capacity).value());
  return ids;
}

std::map<DatanodeId, uint64_t> UsedByNode(const Namenode& nn) {
  std::map<DatanodeId, uint64_t> used;
  for (const auto& info : nn.ClusterStatus()) used[info.id] = info.used_blocks;
  return used;
}

TEST(NamenodeConfigTest, ParsesAndValidates) {
  auto c = ParseNamenodeConfig(
      R"({"block_size_bytes": 65536, "heartbeat_timeout_ms": 2500})");
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c.value().block_size, 65536u);
  EXPECT_EQ(c.value().heartbeat_timeout, std::chrono::milliseconds(2500));
  EXPECT_EQ(ParseNamenodeConfig("{}").value().block_size, kDefaultBlockSize);
  EXPECT_FALSE(ParseNamenodeConfig(R"({"block_size_bytes": 0})").ok());
  EXPECT_FALSE(ParseNamenodeConfig(R"({"placement_policy": "random"})").ok());
  EXPECT_FALSE(ParseNamenodeConfig("{").ok());
}

TEST(NamenodeTest, RegisterAssignsDistinctIds) {
  Namenode nn(SmallBlocks());
  auto a = nn.RegisterDatanode(Addr(0), 10);
  auto b = nn.RegisterDatanode(Addr(1), 10);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_NE(a.value(), b.value());
  EXPECT_NE(a.value(), kLostLocation);
  EXPECT_FALSE(nn.RegisterDatanode("nohost", 10).ok());
  EXPECT_FALSE(nn.RegisterDatanode(Addr(2), 0).ok());
  auto status = nn.ClusterStatus();
  ASSERT_EQ(status.size(), 2u);
  EXPECT_EQ(status[0].state, NodeState::kActive);
  EXPECT_EQ(status[0].capacity_blocks, 10u);
}

TEST(NamenodeTest, CreateSplitsIntoBlocksAndSpreadsThem) {
  Namenode nn(SmallBlocks());
  RegisterN(nn, 4, 100);
  auto meta = nn.CreateObject("obj", 4 * 8 + 3);
  ASSERT_TRUE(meta.ok()) << meta.status().ToString();
  ASSERT_EQ(meta.value().blocks.size(), 9u);
  EXPECT_FALSE(meta.value().sealed);
  for (uint32_t i = 0; i < 9; ++i) {
    EXPECT_EQ(meta.value().blocks[i].index, i);
    EXPECT_EQ(meta.value().blocks[i].length, i < 8 ? 4u : 3u);
    EXPECT_FALSE(meta.value().blocks[i].address.empty());
  }
  auto used = UsedByNode(nn);
  for (const auto& [id, n] : used) EXPECT_TRUE(n == 2 || n == 3) << n;
  EXPECT_TRUE(nn.CheckInvariants().ok());
}

TEST(NamenodeTest, EmptyObjectHasNoBlocks) {
  Namenode nn(SmallBlocks());
  auto meta = nn.CreateObject("empty", 0);
  ASSERT_TRUE(meta.ok());
  EXPECT_TRUE(meta.value().blocks.empty());
}

TEST(NamenodeTest, CreateErrors) {
  Namenode nn(SmallBlocks());
  RegisterN(nn, 1, 2);
  EXPECT_EQ(nn.CreateObject("/bad", 1).status().code(), StatusCode::kProtocolError);
  ASSERT_TRUE(nn.CreateObject("a", 4).ok());
  EXPECT_EQ(nn.CreateObject("a", 4).status().code(), StatusCode::kAlreadyExists);
  // Needs 2 blocks but only 1 is free; nothing is left behind.
  EXPECT_EQ(nn.CreateObject("b", 8).status().code(), StatusCode::kCapacityExhausted);
  EXPECT_EQ(nn.GetMetadata("b").status().code(), StatusCode::kNotFound);
  EXPECT_EQ(UsedByNode(nn).begin()->second, 1u);
  EXPECT_TRUE(nn.CheckInvariants().ok());
}

TEST(NamenodeTest, SealBumpsVersionOnce) {
  Namenode nn(SmallBlocks());
  RegisterN(nn, 2, 10);
  auto created = nn.CreateObject("a", 5).value();
  auto sealed = nn.SealObject("a");
  ASSERT_TRUE(sealed.ok());
  EXPECT_TRUE(sealed.value().sealed);
  EXPECT_GT(sealed.value().version, created.version);
  EXPECT_EQ(nn.SealObject("a").status().code(), StatusCode::kConflict);
  EXPECT_EQ(nn.SealObject("zz").status().code(), StatusCode::kNotFound);
  EXPECT_EQ(nn.AllocateBlock("a", 0, {}, nullptr).status().code(),
            StatusCode::kConflict);
}

TEST(NamenodeTest, VersionsGrowAcrossRecreate) {
  Namenode nn(SmallBlocks());
  RegisterN(nn, 2, 10);
  uint64_t v1 = nn.SealObject((nn.CreateObject("a", 1), "a")).value().version;
  ASSERT_TRUE(nn.DeleteObject("a", 0, nullptr).ok());
  uint64_t v2 = nn.CreateObject("a", 1).value().version;
  EXPECT_GT(v2, v1);
}

TEST(NamenodeTest, AllocateBlockReplacesAndHonoursExclude) {
  Namenode nn(SmallBlocks());
  auto ids = RegisterN(nn, 3, 10);
  auto meta = nn.CreateObject("a", 4).value();
  DatanodeId first = meta.blocks[0].datanode;
  std::vector<DatanodeId> exclude = {first, ids[1] == first ? ids[2] : ids[1]};
  std::vector<BlockDeletion> deletions;
  auto fresh = nn.AllocateBlock("a", 0, exclude, &deletions);
  ASSERT_TRUE(fresh.ok());
  EXPECT_NE(fresh.value().block_id, meta.blocks[0].block_id);
  EXPECT_TRUE(std::find(exclude.begin(), exclude.end(), fresh.value().datanode) ==
              exclude.end());
  ASSERT_EQ(deletions.size(), 1u);
  EXPECT_EQ(deletions[0].block, meta.blocks[0].block_id);
  EXPECT_GT(nn.GetMetadata("a").value().version, meta.version);
  std::vector<DatanodeId> all(ids.begin(), ids.end());
  EXPECT_EQ(nn.AllocateBlock("a", 0, all, nullptr).status().code(),
            StatusCode::kCapacityExhausted);
  EXPECT_EQ(nn.AllocateBlock("a", 7, {}, nullptr).status().code(),
            StatusCode::kProtocolError);
  EXPECT_TRUE(nn.CheckInvariants().ok());
}

TEST(NamenodeTest, DrainingNodeGetsNoPlacements) {
  Namenode nn(SmallBlocks());
  auto ids = RegisterN(nn, 3, 100);
  ASSERT_TRUE(nn.BeginDrain(ids[1], SystemClock::Get()->Now()).ok());
  EXPECT_EQ(nn.BeginDrain(ids[1], SystemClock::Get()->Now()).code(),
            StatusCode::kConflict);
  auto meta = nn.CreateObject("a", 4 * 30).value();
  for (const auto& b : meta.blocks) EXPECT_NE(b.datanode, ids[1]);
  auto status = nn.ClusterStatus();
  EXPECT_EQ(status[1].state, NodeState::kDraining);
  EXPECT_NE(status[1].deadline_ms, 0);
}

TEST(NamenodeTest, RelocationCommitIsCompareAndSet) {
  Namenode nn(SmallBlocks());
  auto ids = RegisterN(nn, 3, 10);
  auto meta = nn.SealObject((nn.CreateObject("a", 4), "a")).value();
  const BlockDescriptor& b = meta.blocks[0];
  auto target = nn.ReserveRelocationTarget(b.block_id, {});
  ASSERT_TRUE(target.ok());
  EXPECT_NE(target.value().datanode, b.datanode);
  EXPECT_EQ(target.value().version, b.version);

  EXPECT_EQ(nn.CommitRelocation(b.block_id, target.value().datanode, b.version + 1)
                .status().code(),
            StatusCode::kStaleLocation);
  auto v = nn.CommitRelocation(b.block_id, target.value().datanode, b.version);
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v.value(), b.version + 1);
  // A second commit with the old token loses.
  EXPECT_EQ(nn.CommitRelocation(b.block_id, b.datanode, b.version).status().code(),
            StatusCode::kStaleLocation);
  auto after = nn.GetMetadata("a").value();
  EXPECT_EQ(after.blocks[0].datanode, target.value().datanode);
  EXPECT_EQ(after.blocks[0].block_id, b.block_id);
  EXPECT_GT(after.version, meta.version);
  EXPECT_TRUE(nn.CheckInvariants().ok());
}

TEST(NamenodeTest, ConcurrentCommitsExactlyOneWins) {
  Namenode nn(SmallBlocks());
  auto ids = RegisterN(nn, 8, 10);
  auto meta = nn.CreateObject("a", 4).value();
  const BlockDescriptor b = meta.blocks[0];
  std::vector<DatanodeId> targets;
  for (DatanodeId id : ids) {
    if (id != b.datanode) targets.push_back(id);
  }
  std::atomic<int> wins{0};
  std::atomic<int> stale{0};
  std::vector<std::thread> threads;
  for (DatanodeId t : targets) {
    threads.emplace_back([&, t] {
      auto r = nn.CommitRelocation(b.block_id, t, b.version);
      if (r.ok()) ++wins;
      else if (r.status().code() == StatusCode::kStaleLocation) ++stale;
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(wins.load(), 1);
  EXPECT_EQ(stale.load(), static_cast<int>(targets.size()) - 1);
  EXPECT_TRUE(nn.CheckInvariants().ok());
}

TEST(NamenodeTest, ReservationsCountAgainstCapacity) {
  Namenode nn(SmallBlocks());
  auto ids = RegisterN(nn, 2, 1);
  auto meta = nn.CreateObject("a", 4).value();
  DatanodeId other = meta.blocks[0].datanode == ids[0] ? ids[1] : ids[0];
  ASSERT_TRUE(nn.ReserveRelocationTarget(meta.blocks[0].block_id, {}).ok());
  // The only free slot is reserved.
  EXPECT_EQ(nn.CreateObject("b", 4).status().code(), StatusCode::kCapacityExhausted);
  // Draining the reserved node releases the reservation and blocks the commit.
  ASSERT_TRUE(nn.BeginDrain(other, SystemClock::Get()->Now()).ok());
  EXPECT_EQ(nn.CommitRelocation(meta.blocks[0].block_id, other,
                                meta.blocks[0].version).status().code(),
            StatusCode::kConflict);
  EXPECT_TRUE(nn.CheckInvariants().ok());
}

TEST(NamenodeTest, TerminationMarksBlocksLost) {
  Namenode nn(SmallBlocks());
  auto ids = RegisterN(nn, 2, 100);
  auto meta = nn.CreateObject("a", 4 * 10).value();
  uint64_t on_first = 0;
  for (const auto& b : meta.blocks) on_first += b.datanode == ids[0];
  auto lost = nn.MarkNodeTerminated(ids[0]);
  ASSERT_TRUE(lost.ok());
  EXPECT_EQ(lost.value(), on_first);
  EXPECT_EQ(nn.MarkNodeTerminated(ids[0]).status().code(), StatusCode::kConflict);
  EXPECT_EQ(nn.BeginDrain(ids[0], SystemClock::Get()->Now()).code(),
            StatusCode::kConflict);
  EXPECT_EQ(nn.Heartbeat(ids[0]).code(), StatusCode::kConflict);
  auto after = nn.GetMetadata("a").value();
  EXPECT_GT(after.version, meta.version);
  for (size_t i = 0; i < after.blocks.size(); ++i) {
    if (meta.blocks[i].datanode == ids[0]) {
      EXPECT_TRUE(after.blocks[i].lost());
      EXPECT_TRUE(after.blocks[i].address.empty());
      EXPECT_GT(after.blocks[i].version, meta.blocks[i].version);
    } else {
      EXPECT_EQ(after.blocks[i], meta.blocks[i]);
    }
  }
  EXPECT_EQ(nn.counters().blocks_lost, on_first);
  EXPECT_TRUE(nn.CheckInvariants().ok());
  // Deleting the object releases lost blocks too.
  ASSERT_TRUE(nn.DeleteObject("a", 0, nullptr).ok());
  EXPECT_EQ(nn.counters().blocks_lost, 0u);
  EXPECT_TRUE(nn.CheckInvariants().ok());
}

TEST(NamenodeTest, ConditionalDelete) {
  Namenode nn(SmallBlocks());
  RegisterN(nn, 2, 10);
  auto meta = nn.CreateObject("a", 9).value();
  EXPECT_EQ(nn.DeleteObject("a", meta.version + 1, nullptr).code(),
            StatusCode::kStaleLocation);
  std::vector<BlockDeletion> deletions;
  ASSERT_TRUE(nn.DeleteObject("a", meta.version, &deletions).ok());
  EXPECT_EQ(deletions.size(), 3u);
  EXPECT_EQ(nn.DeleteObject("a", 0, nullptr).code(), StatusCode::kNotFound);
}

TEST(NamenodeTest, ReaperTerminatesSilentNodes) {
  SimulatedClock clock;
  NamenodeConfig config = SmallBlocks();
  config.heartbeat_timeout = std::chrono::seconds(5);
  Namenode nn(config, &clock);
  auto ids = RegisterN(nn, 2, 10);
  ASSERT_TRUE(nn.CreateObject("a", 8).ok());
  clock.Advance(std::chrono::seconds(4));
  ASSERT_TRUE(nn.Heartbeat(ids[1]).ok());
  EXPECT_TRUE(nn.ReapExpired().empty());
  clock.Advance(std::chrono::seconds(2));
  auto reaped = nn.ReapExpired();
  ASSERT_EQ(reaped.size(), 1u);
  EXPECT_EQ(reaped[0].first, ids[0]);
  EXPECT_EQ(reaped[0].second, 1u);
  EXPECT_EQ(nn.ClusterStatus()[0].state, NodeState::kTerminated);
  EXPECT_TRUE(nn.CheckInvariants().ok());
}

// Random operations checked against a capacity model: every outcome is
// predicted from per-node free slots before the call is made.
TEST(NamenodeModelTest, RandomOperationsMatchModel) {
  constexpr uint64_t kBlock = 4;
  constexpr uint64_t kCapacity = 8;
  Namenode nn(SmallBlocks(kBlock));
  std::mt19937_64 rng(7);
  auto pick = [&](size_t n) { return static_cast<size_t>(rng() % n); };

  std::map<DatanodeId, NodeState> states;
  std::map<DatanodeId, uint64_t> capacity;
  auto add_node = [&] {
    DatanodeId id = nn.RegisterDatanode(Addr(static_cast<int>(states.size())),
                                        kCapacity).value();
    states[id] = NodeState::kActive;
    capacity[id] = kCapacity;
  };
  for (int i = 0; i < 4; ++i) add_node();

  struct ModelObject {
    uint64_t size = 0;
    bool sealed = false;
    uint64_t version = 0;
  };
  std::map<std::string, ModelObject> objects;
  uint64_t last_version = 0;

  auto free_slots = [&](DatanodeId skip) {
    auto used = UsedByNode(nn);
    uint64_t total = 0;
    for (const auto& [id, s] : states) {
      if (s == NodeState::kActive && id != skip) total += capacity[id] - used[id];
    }
    return total;
  };
  auto any_free = [&](DatanodeId skip) { return free_slots(skip) > 0; };
  auto expect_newer = [&](const std::string& name, uint64_t v) {
    EXPECT_GT(v, objects[name].version) << name;
    EXPECT_GT(v, last_version);
    objects[name].version = v;
    last_version = v;
  };

  for (int step = 0; step < 3000; ++step) {
    SCOPED_TRACE("step " + std::to_string(step));
    std::string name = "o" + std::to_string(pick(12));
    bool exists = objects.count(name) > 0;
    switch (pick(10)) {
      case 0:
      case 1: {
        uint64_t size = pick(6 * kBlock);
        uint64_t need = SplitIntoBlocks(size, kBlock).size();
        uint64_t pre_free = free_slots(kLostLocation);
        auto r = nn.CreateObject(name, size);
        if (exists) {
          EXPECT_EQ(r.status().code(), StatusCode::kAlreadyExists);
        } else if (pre_free >= need) {
          ASSERT_TRUE(r.ok()) << r.status().ToString();
          objects[name] = {size, false, 0};
          expect_newer(name, r.value().version);
        } else {
          EXPECT_EQ(r.status().code(), StatusCode::kCapacityExhausted);
        }
        break;
      }
      case 2: {
        auto r = nn.SealObject(name);
        if (!exists) {
          EXPECT_EQ(r.status().code(), StatusCode::kNotFound);
        } else if (objects[name].sealed) {
          EXPECT_EQ(r.status().code(), StatusCode::kConflict);
        } else {
          ASSERT_TRUE(r.ok());
          objects[name].sealed = true;
          expect_newer(name, r.value().version);
        }
        break;
      }
      case 3: {
        bool conditional = pick(2);
        bool stale = conditional && pick(2);
        uint64_t expected = !conditional ? 0
                            : exists     ? objects[name].version + (stale ? 1 : 0)
                                         : 1;
        Status s = nn.DeleteObject(name, expected, nullptr);
        if (!exists) {
          EXPECT_EQ(s.code(), StatusCode::kNotFound);
        } else if (stale) {
          EXPECT_EQ(s.code(), StatusCode::kStaleLocation);
        } else {
          EXPECT_TRUE(s.ok());
          objects.erase(name);
        }
        break;
      }
      case 4: {
        if (!exists || objects[name].sealed) break;
        auto meta = nn.GetMetadata(name).value();
        if (meta.blocks.empty()) break;
        uint32_t index = static_cast<uint32_t>(pick(meta.blocks.size()));
        bool ok_expected = any_free(kLostLocation);
        auto r = nn.AllocateBlock(name, index, {}, nullptr);
        if (ok_expected) {
          ASSERT_TRUE(r.ok()) << r.status().ToString();
          EXPECT_EQ(states[r.value().datanode], NodeState::kActive);
          expect_newer(name, nn.GetMetadata(name).value().version);
        } else {
          EXPECT_EQ(r.status().code(), StatusCode::kCapacityExhausted);
        }
        break;
      }
      case 5:
      case 6: {
        if (!exists) break;
        auto meta = nn.GetMetadata(name).value();
        if (meta.blocks.empty()) break;
        BlockDescriptor b = meta.blocks[pick(meta.blocks.size())];
        if (pick(4) == 0) {
          // A stale token is refused before any capacity check.
          DatanodeId dst = std::next(states.begin(), pick(states.size()))->first;
          auto v = nn.CommitRelocation(b.block_id, dst, b.version + 1);
          EXPECT_EQ(v.status().code(),
                    b.lost() ? StatusCode::kConflict : StatusCode::kStaleLocation);
          break;
        }
        bool room = any_free(b.datanode);
        auto target = nn.ReserveRelocationTarget(b.block_id, {});
        if (b.lost()) {
          EXPECT_EQ(target.status().code(), StatusCode::kConflict);
          break;
        }
        if (!room) {
          EXPECT_EQ(target.status().code(), StatusCode::kCapacityExhausted);
          break;
        }
        ASSERT_TRUE(target.ok()) << target.status().ToString();
        EXPECT_EQ(states[target.value().datanode], NodeState::kActive);
        auto v = nn.CommitRelocation(b.block_id, target.value().datanode, b.version);
        ASSERT_TRUE(v.ok()) << v.status().ToString();
        EXPECT_EQ(v.value(), b.version + 1);
        expect_newer(name, nn.GetMetadata(name).value().version);
        break;
      }
      case 7: {
        if (pick(3) != 0) break;
        DatanodeId node = std::next(states.begin(), pick(states.size()))->first;
        Status s = nn.BeginDrain(node, SystemClock::Get()->Now());
        if (states[node] == NodeState::kActive) {
          EXPECT_TRUE(s.ok());
          states[node] = NodeState::kDraining;
        } else {
          EXPECT_EQ(s.code(), StatusCode::kConflict);
        }
        break;
      }
      case 8: {
        if (pick(4) != 0) break;
        DatanodeId node = std::next(states.begin(), pick(states.size()))->first;
        uint64_t held = UsedByNode(nn)[node];
        auto r = nn.MarkNodeTerminated(node);
        if (states[node] == NodeState::kTerminated) {
          EXPECT_EQ(r.status().code(), StatusCode::kConflict);
        } else {
          ASSERT_TRUE(r.ok());
          EXPECT_EQ(r.value(), held);
          states[node] = NodeState::kTerminated;
          for (auto& [n, o] : objects) {
            uint64_t v = nn.GetMetadata(n).value().version;
            if (v != o.version) expect_newer(n, v);
          }
        }
        break;
      }
      case 9:
        if (pick(3) == 0) add_node();
        break;
    }
    ASSERT_TRUE(nn.CheckInvariants().ok()) << nn.CheckInvariants().ToString();

    // Model and namenode agree on every object and every block location.
    std::map<DatanodeId, uint64_t> expected_used;
    for (const auto& [n, o] : objects) {
      auto meta = nn.GetMetadata(n);
      ASSERT_TRUE(meta.ok());
      EXPECT_EQ(meta.value().size, o.size);
      EXPECT_EQ(meta.value().sealed, o.sealed);
      EXPECT_EQ(meta.value().version, o.version);
      for (const auto& b : meta.value().blocks) {
        if (b.lost()) continue;
        EXPECT_NE(states[b.datanode], NodeState::kTerminated);
        ++expected_used[b.datanode];
      }
    }
    for (const auto& [id, used] : UsedByNode(nn)) {
      EXPECT_EQ(used, expected_used[id]) << "node " << id;
    }
  }
}

class NamenodeServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    service_ = std::make_unique<NamenodeService>(SmallBlocks(1024));
    auto bound = service_->Start({"127.0.0.1", 0});
    ASSERT_TRUE(bound.ok());
    stub_ = std::make_unique<NamenodeStub>(std::make_shared<RpcClient>(),
                                           bound.value().ToString());
  }
  void TearDown() override { service_->Stop(); }

  std::unique_ptr<NamenodeService> service_;
  std::unique_ptr<NamenodeStub> stub_;
};

TEST_F(NamenodeServiceTest, EndToEndOverRpc) {
  auto reg = stub_->Register(Addr(1), 16);
  ASSERT_TRUE(reg.ok()) << reg.status().ToString();
  EXPECT_EQ(reg.value().block_size, 1024u);
  ASSERT_TRUE(stub_->Register(Addr(2), 16).ok());
  EXPECT_TRUE(stub_->Heartbeat(reg.value().node).ok());

  auto meta = stub_->CreateObject("x/y", 3000);
  ASSERT_TRUE(meta.ok());
  EXPECT_EQ(meta.value().blocks.size(), 3u);
  EXPECT_EQ(stub_->CreateObject("x/y", 1).status().code(), StatusCode::kAlreadyExists);
  ASSERT_TRUE(stub_->SealObject("x/y").ok());
  EXPECT_TRUE(stub_->GetMetadata("x/y").value().sealed);

  auto list = stub_->ListBlocksOnNode(reg.value().node);
  ASSERT_TRUE(list.ok());
  for (const auto& nb : list.value()) EXPECT_EQ(nb.object, "x/y");

  const auto& b = meta.value().blocks[0];
  auto target = stub_->ReserveRelocationTarget("x/y", b.block_id, {});
  ASSERT_TRUE(target.ok()) << target.status().ToString();
  auto v = stub_->CommitRelocation(b.block_id, target.value().datanode, b.version);
  ASSERT_TRUE(v.ok()) << v.status().ToString();

  ASSERT_TRUE(stub_->BeginDrain(reg.value().node, SystemClock::Get()->Now()).ok());
  auto lost = stub_->MarkNodeTerminated(reg.value().node);
  ASSERT_TRUE(lost.ok());
  auto cs = stub_->ClusterStatus();
  ASSERT_TRUE(cs.ok());
  EXPECT_EQ(cs.value().nodes[0].state, NodeState::kTerminated);
  ASSERT_TRUE(stub_->DeleteObject("x/y").ok());
  EXPECT_EQ(stub_->GetMetadata("x/y").status().code(), StatusCode::kNotFound);
  EXPECT_TRUE(service_->namenode().CheckInvariants().ok());
}

TEST_F(NamenodeServiceTest, RejectsDatanodeOnlyMessages) {
  Message reply = service_->Handle(ReadBlockRequest{BlockId{1}, 0, 1});
  ASSERT_TRUE(std::holds_alternative<ErrorResponse>(reply));
  EXPECT_EQ(std::get<ErrorResponse>(reply).code, StatusCode::kProtocolError);
  Message bad_version = service_->Handle(RegisterRequest{9, Addr(3), 4});
  ASSERT_TRUE(std::holds_alternative<ErrorResponse>(bad_version));
}

}  // namespace
}  // namespace ess
