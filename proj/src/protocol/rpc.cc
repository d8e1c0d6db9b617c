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

#include "ess/protocol/rpc.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>

#include <spdlog/spdlog.h>

namespace ess {

RpcServer::RpcServer(Handler handler) : handler_(std::move(handler)) {}

RpcServer::~RpcServer() {
  Shutdown();
  if (accept_thread_.joinable()) accept_thread_.join();
  std::list<Connection> remaining;
  {
    std::lock_guard<std::mutex> lock(mu_);
    remaining.splice(remaining.end(), connections_);
  }
  for (auto& c : remaining) {
    if (c.thread.joinable()) c.thread.join();
  }
}

Result<HostPort> RpcServer::Start(const HostPort& listen) {
  ESS_ASSIGN_OR_RETURN(Socket sock, ListenOn(listen));
  ESS_ASSIGN_OR_RETURN(address_, LocalAddress(sock.fd()));
  if (listen.host != "0.0.0.0") address_.host = listen.host;
  listen_fd_ = sock.Release();
  accept_thread_ = std::thread([this] { AcceptLoop(); });
  return address_;
}

void RpcServer::Shutdown() {
  if (stopping_.exchange(true)) return;
  // shutdown() on a listening socket unhashes it, so new connects are
  // refused immediately; the accept thread closes the descriptor.
  if (listen_fd_ >= 0) ::shutdown(listen_fd_, SHUT_RDWR);
  std::lock_guard<std::mutex> lock(mu_);
  for (auto& c : connections_) {
    if (!c.done && c.fd >= 0) ::shutdown(c.fd, SHUT_RDWR);
  }
}

void RpcServer::ReapFinishedLocked(std::vector<std::thread>* to_join) {
  for (auto it = connections_.begin(); it != connections_.end();) {
    if (it->done) {
      to_join->push_back(std::move(it->thread));
      it = connections_.erase(it);
    } else {
      ++it;
    }
  }
}

void RpcServer::AcceptLoop() {
  while (!stopping_.load()) {
    pollfd p{listen_fd_, POLLIN, 0};
    int rc = ::poll(&p, 1, 200);
    if (rc <= 0) continue;
    sockaddr_in peer{};
    socklen_t len = sizeof(peer);
    int fd = ::accept4(listen_fd_, reinterpret_cast<sockaddr*>(&peer), &len,
                       SOCK_CLOEXEC);
    if (fd < 0) continue;
    if (stopping_.load()) {
      ::close(fd);
      break;
    }
    char buf[INET_ADDRSTRLEN];
    ::inet_ntop(AF_INET, &peer.sin_addr, buf, sizeof(buf));
    PeerInfo info{std::string(buf) + ":" + std::to_string(ntohs(peer.sin_port)),
                  (ntohl(peer.sin_addr.s_addr) >> 24) == 127};

    std::vector<std::thread> finished;
    {
      std::lock_guard<std::mutex> lock(mu_);
      ReapFinishedLocked(&finished);
      connections_.push_back(Connection{fd, false, {}});
      auto it = std::prev(connections_.end());
      it->thread = std::thread([this, it, info] { Serve(it, info); });
    }
    for (auto& t : finished) t.join();
  }
  ::close(listen_fd_);
}

void RpcServer::Serve(std::list<Connection>::iterator conn, PeerInfo peer) {
  int fd;
  {
    std::lock_guard<std::mutex> lock(mu_);
    fd = conn->fd;
    if (stopping_.load()) ::shutdown(fd, SHUT_RDWR);
  }
  while (!stopping_.load()) {
    Result<Message> request = ReadMessage(fd, std::nullopt);
    if (!request.ok()) {
      if (request.status().code() == StatusCode::kProtocolError) {
        (void)WriteMessage(fd, MakeErrorResponse(request.status()),
                           std::chrono::steady_clock::now() +
                               std::chrono::seconds(1));
      }
      break;
    }
    std::optional<Message> reply = handler_(*request, peer);
    if (!reply) break;
    if (!WriteMessage(fd, *reply, std::nullopt).ok()) break;
  }
  std::lock_guard<std::mutex> lock(mu_);
  ::close(fd);
  conn->fd = -1;
  conn->done = true;
}

RpcClient::RpcClient() : RpcClient(Options{}) {}

RpcClient::RpcClient(Options options) : options_(options) {}

Result<Message> RpcClient::Call(const std::string& address,
                                const Message& request, Deadline deadline) {
  if (!deadline) {
    deadline = std::chrono::steady_clock::now() + options_.default_call_timeout;
  }
  // A pooled connection may have been closed by the server since its last
  // use; such a failure is retried once on a fresh connection.
  for (int attempt = 0;; ++attempt) {
    bool retryable = false;
    Result<Message> reply = CallOnce(address, request, deadline, &retryable);
    if (reply.ok() || !retryable || attempt >= 1) return reply;
  }
}

Result<Message> RpcClient::CallOnce(const std::string& address,
                                    const Message& request, Deadline deadline,
                                    bool* retryable) {
  Socket sock;
  bool reused = false;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = idle_.find(address);
    if (it != idle_.end() && !it->second.empty()) {
      sock = std::move(it->second.back());
      it->second.pop_back();
      reused = true;
    }
  }
  if (!reused) {
    ESS_ASSIGN_OR_RETURN(HostPort hp, ParseHostPort(address));
    auto connect_deadline =
        std::min(*deadline,
                 std::chrono::steady_clock::now() + options_.connect_timeout);
    ESS_ASSIGN_OR_RETURN(sock, ConnectTo(hp, connect_deadline));
  }

  Status sent = WriteMessage(sock.fd(), request, deadline);
  if (!sent.ok()) {
    *retryable = reused;
    return sent;
  }
  bool received_any = false;
  Result<Message> reply = ReadMessage(sock.fd(), deadline, &received_any);
  if (!reply.ok()) {
    *retryable = reused && !received_any &&
                 reply.status().code() == StatusCode::kUnavailable;
    return reply.status();
  }

  {
    std::lock_guard<std::mutex> lock(mu_);
    auto& pool = idle_[address];
    if (pool.size() < options_.max_idle_per_address) {
      pool.push_back(std::move(sock));
    }
  }
  if (auto* err = std::get_if<ErrorResponse>(&*reply)) {
    return Status(err->code, err->message);
  }
  return reply;
}

void RpcClient::DropConnections(const std::string& address) {
  std::lock_guard<std::mutex> lock(mu_);
  idle_.erase(address);
}

}  // namespace ess
