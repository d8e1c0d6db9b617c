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

#ifndef ESS_NAMENODE_NAMENODE_SERVICE_H_
#define ESS_NAMENODE_NAMENODE_SERVICE_H_

#include <condition_variable>
#include <memory>
#include <mutex>
#include <thread>

#include "ess/namenode/namenode.h"
#include "ess/protocol/rpc.h"
#include "ess/protocol/stubs.h"

namespace ess {

// Serves a Namenode over the wire protocol. Datanode block deletions are sent
// before the reply, outside the metadata lock; heartbeat expiry runs on a
// background thread.
class NamenodeService {
 public:
  explicit NamenodeService(NamenodeConfig config,
                           Clock* clock = SystemClock::Get());
  ~NamenodeService();

  NamenodeService(const NamenodeService&) = delete;
  NamenodeService& operator=(const NamenodeService&) = delete;

  Result<HostPort> Start(const HostPort& listen);
  void Stop();

  Namenode& namenode() { return namenode_; }
  std::string address() const { return server_.address().ToString(); }

  Message Handle(const Message& request);

 private:
  void IssueDeletions(const std::vector<BlockDeletion>& deletions);
  void ReaperLoop();

  Namenode namenode_;
  RpcServer server_;
  DatanodeStub datanodes_;

  std::mutex mu_;
  std::condition_variable cv_;
  bool stopping_ = false;
  std::thread reaper_thread_;
};

}  // namespace ess

#endif  // ESS_NAMENODE_NAMENODE_SERVICE_H_
