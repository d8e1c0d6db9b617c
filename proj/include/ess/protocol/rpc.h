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

#ifndef ESS_PROTOCOL_RPC_H_
#define ESS_PROTOCOL_RPC_H_

#include <atomic>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ess/common/status.h"
#include "ess/protocol/messages.h"
#include "ess/protocol/net.h"

namespace ess {

struct PeerInfo {
  std::string address;
  bool loopback = false;
};

// Serves one request/response exchange per frame on each connection, one
// thread per connection. Requests on a connection are answered in order, so
// clients may pipeline.
class RpcServer {
 public:
  // Returning nullopt closes the connection without a reply.
  using Handler =
      std::function<std::optional<Message>(const Message&, const PeerInfo&)>;

  explicit RpcServer(Handler handler);
  ~RpcServer();

  RpcServer(const RpcServer&) = delete;
  RpcServer& operator=(const RpcServer&) = delete;

  // Port 0 binds an ephemeral port; the bound address is returned.
  Result<HostPort> Start(const HostPort& listen);

  // Stops accepting (new connects are refused) and disconnects every client.
  // Safe to call from inside a handler and more than once.
  void Shutdown();

  const HostPort& address() const { return address_; }

 private:
  struct Connection {
    int fd = -1;
    bool done = false;
    std::thread thread;
  };

  void AcceptLoop();
  void Serve(std::list<Connection>::iterator conn, PeerInfo peer);
  void ReapFinishedLocked(std::vector<std::thread>* to_join);

  Handler handler_;
  HostPort address_;
  int listen_fd_ = -1;
  std::thread accept_thread_;
  std::atomic<bool> stopping_{false};

  std::mutex mu_;
  std::list<Connection> connections_;
};

// Request/response client with a per-address pool of idle connections.
// Thread-safe.
class RpcClient {
 public:
  struct Options {
    Duration connect_timeout = std::chrono::seconds(2);
    // Applied when the caller passes no deadline.
    Duration default_call_timeout = std::chrono::seconds(60);
    size_t max_idle_per_address = 32;
  };

  RpcClient();
  explicit RpcClient(Options options);

  // ErrorResponse replies come back as the matching non-OK Status; transport
  // failures as Unavailable or DeadlineExceeded.
  Result<Message> Call(const std::string& address, const Message& request,
                       Deadline deadline = std::nullopt);

  template <typename Response>
  Result<Response> CallAs(const std::string& address, const Message& request,
                          Deadline deadline = std::nullopt) {
    ESS_ASSIGN_OR_RETURN(Message reply, Call(address, request, deadline));
    if (auto* r = std::get_if<Response>(&reply)) return std::move(*r);
    return ProtocolError(std::string("unexpected reply ") +
                         std::string(MessageTypeName(TypeOf(reply))));
  }

  void DropConnections(const std::string& address);

 private:
  Result<Message> CallOnce(const std::string& address, const Message& request,
                           Deadline deadline, bool* retryable);

  Options options_;
  std::mutex mu_;
  std::map<std::string, std::vector<Socket>> idle_;
};

}  // namespace ess

#endif  // ESS_PROTOCOL_RPC_H_
