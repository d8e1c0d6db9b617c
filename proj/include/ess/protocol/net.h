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

#ifndef ESS_PROTOCOL_NET_H_
#define ESS_PROTOCOL_NET_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ess/common/clock.h"
#include "ess/common/status.h"
#include "ess/protocol/messages.h"

namespace ess {

struct HostPort {
  std::string host;
  uint16_t port = 0;

  std::string ToString() const;
  bool operator==(const HostPort&) const = default;
};

// Accepts "host:port" with a non-empty host and a port in [0, 65535].
Result<HostPort> ParseHostPort(std::string_view address);

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& other) noexcept : fd_(other.Release()) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { Close(); }

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int Release();
  void Close();

 private:
  int fd_ = -1;
};

// Deadlines are wall-clock (steady_clock); nullopt blocks indefinitely.
using Deadline = std::optional<TimePoint>;

Result<Socket> ConnectTo(const HostPort& addr, Deadline deadline);
Result<Socket> ListenOn(const HostPort& addr, int backlog = 128);
Result<HostPort> LocalAddress(int fd);

Status WriteMessage(int fd, const Message& msg, Deadline deadline);

// `received_any` reports whether any byte of the frame arrived, which lets
// callers tell a dead pooled connection from a failed exchange.
Result<Message> ReadMessage(int fd, Deadline deadline,
                            bool* received_any = nullptr);

}  // namespace ess

#endif  // ESS_PROTOCOL_NET_H_
