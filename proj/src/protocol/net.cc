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

#include "ess/protocol/net.h"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <vector>

#include "ess/protocol/codec.h"

namespace ess {
namespace {

Status ErrnoStatus(std::string_view what, int err) {
  return Unavailable(std::string(what) + ": " + std::strerror(err));
}

// Milliseconds for poll(), or -1 for no deadline.
int PollTimeout(Deadline deadline) {
  if (!deadline) return -1;
  auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                  *deadline - std::chrono::steady_clock::now())
                  .count();
  if (left <= 0) return 0;
  return left > 60'000 ? 60'000 : static_cast<int>(left) + 1;
}

bool Expired(Deadline deadline) {
  return deadline && std::chrono::steady_clock::now() >= *deadline;
}

Status WaitFor(int fd, short events, Deadline deadline) {
  while (true) {
    pollfd p{fd, events, 0};
    int rc = ::poll(&p, 1, PollTimeout(deadline));
    if (rc > 0) return Status::Ok();
    if (rc < 0 && errno != EINTR) return ErrnoStatus("poll", errno);
    if (rc == 0 && Expired(deadline)) return DeadlineExceeded("socket timed out");
  }
}

Status SendAll(int fd, std::span<const uint8_t> data, Deadline deadline) {
  size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd, data.data() + sent, data.size() - sent,
                       MSG_NOSIGNAL | MSG_DONTWAIT);
    if (n > 0) {
      sent += static_cast<size_t>(n);
      continue;
    }
    if (n < 0 && errno == EINTR) continue;
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
      ESS_RETURN_IF_ERROR(WaitFor(fd, POLLOUT, deadline));
      continue;
    }
    return ErrnoStatus("send", errno);
  }
  return Status::Ok();
}

Status RecvAll(int fd, std::span<uint8_t> out, Deadline deadline,
               bool* received_any) {
  size_t got = 0;
  while (got < out.size()) {
    ssize_t n = ::recv(fd, out.data() + got, out.size() - got, MSG_DONTWAIT);
    if (n > 0) {
      got += static_cast<size_t>(n);
      if (received_any) *received_any = true;
      continue;
    }
    if (n == 0) return Unavailable("connection closed by peer");
    if (errno == EINTR) continue;
    if (errno == EAGAIN || errno == EWOULDBLOCK) {
      ESS_RETURN_IF_ERROR(WaitFor(fd, POLLIN, deadline));
      continue;
    }
    return ErrnoStatus("recv", errno);
  }
  return Status::Ok();
}

Result<sockaddr_in> Resolve(const HostPort& addr) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  int rc = ::getaddrinfo(addr.host.c_str(), nullptr, &hints, &res);
  if (rc != 0 || res == nullptr) {
    return Unavailable("cannot resolve " + addr.host + ": " +
                       ::gai_strerror(rc));
  }
  sockaddr_in sin{};
  std::memcpy(&sin, res->ai_addr, sizeof(sin));
  ::freeaddrinfo(res);
  sin.sin_port = htons(addr.port);
  return sin;
}

}  // namespace

std::string HostPort::ToString() const {
  return host + ":" + std::to_string(port);
}

Result<HostPort> ParseHostPort(std::string_view address) {
  size_t colon = address.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    return ProtocolError("malformed address '" + std::string(address) +
                         "', expected host:port");
  }
  std::string_view port_str = address.substr(colon + 1);
  unsigned port = 0;
  auto [ptr, ec] = std::from_chars(port_str.data(),
                                   port_str.data() + port_str.size(), port);
  if (ec != std::errc() || ptr != port_str.data() + port_str.size() ||
      port_str.empty() || port > 65535) {
    return ProtocolError("malformed port in '" + std::string(address) + "'");
  }
  return HostPort{std::string(address.substr(0, colon)),
                  static_cast<uint16_t>(port)};
}

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    Close();
    fd_ = other.Release();
  }
  return *this;
}

int Socket::Release() {
  int fd = fd_;
  fd_ = -1;
  return fd;
}

void Socket::Close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

Result<Socket> ConnectTo(const HostPort& addr, Deadline deadline) {
  ESS_ASSIGN_OR_RETURN(sockaddr_in sin, Resolve(addr));
  Socket sock(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC | SOCK_NONBLOCK, 0));
  if (!sock.valid()) return ErrnoStatus("socket", errno);
  int rc = ::connect(sock.fd(), reinterpret_cast<sockaddr*>(&sin), sizeof(sin));
  if (rc < 0 && errno != EINPROGRESS) {
    return ErrnoStatus("connect " + addr.ToString(), errno);
  }
  if (rc < 0) {
    ESS_RETURN_IF_ERROR(WaitFor(sock.fd(), POLLOUT, deadline));
    int err = 0;
    socklen_t len = sizeof(err);
    ::getsockopt(sock.fd(), SOL_SOCKET, SO_ERROR, &err, &len);
    if (err != 0) return ErrnoStatus("connect " + addr.ToString(), err);
  }
  int one = 1;
  ::setsockopt(sock.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return sock;
}

Result<Socket> ListenOn(const HostPort& addr, int backlog) {
  ESS_ASSIGN_OR_RETURN(sockaddr_in sin, Resolve(addr));
  Socket sock(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!sock.valid()) return ErrnoStatus("socket", errno);
  int one = 1;
  ::setsockopt(sock.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(sock.fd(), reinterpret_cast<sockaddr*>(&sin), sizeof(sin)) < 0) {
    return ErrnoStatus("bind " + addr.ToString(), errno);
  }
  if (::listen(sock.fd(), backlog) < 0) return ErrnoStatus("listen", errno);
  return sock;
}

Result<HostPort> LocalAddress(int fd) {
  sockaddr_in sin{};
  socklen_t len = sizeof(sin);
  if (::getsockname(fd, reinterpret_cast<sockaddr*>(&sin), &len) < 0) {
    return ErrnoStatus("getsockname", errno);
  }
  char buf[INET_ADDRSTRLEN];
  ::inet_ntop(AF_INET, &sin.sin_addr, buf, sizeof(buf));
  return HostPort{buf, ntohs(sin.sin_port)};
}

Status WriteMessage(int fd, const Message& msg, Deadline deadline) {
  ESS_ASSIGN_OR_RETURN(std::vector<uint8_t> frame, EncodeMessage(msg));
  return SendAll(fd, frame, deadline);
}

Result<Message> ReadMessage(int fd, Deadline deadline, bool* received_any) {
  if (received_any) *received_any = false;
  uint8_t header[kFrameHeaderSize];
  ESS_RETURN_IF_ERROR(RecvAll(fd, header, deadline, received_any));
  FrameHeader h = ParseFrameHeader(std::span<const uint8_t, kFrameHeaderSize>(
      header, kFrameHeaderSize));
  if (h.payload_length > kMaxPayloadSize) {
    return ProtocolError("frame length exceeds limit");
  }
  std::vector<uint8_t> payload(h.payload_length);
  ESS_RETURN_IF_ERROR(RecvAll(fd, payload, deadline, received_any));
  return DecodePayload(h.type, payload);
}

}  // namespace ess
