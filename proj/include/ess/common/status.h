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

#ifndef ESS_COMMON_STATUS_H_
#define ESS_COMMON_STATUS_H_

#include <cassert>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace ess {

// Codes 1..8 travel on the wire inside ErrorResponse and keep these values
// forever. Codes >= 64 are local to a process (transport failures, argument
// validation) and are never encoded.
enum class StatusCode : uint8_t {
  kOk = 0,
  kNotFound = 1,
  kDataUnavailable = 2,
  kNodeDraining = 3,
  kStaleLocation = 4,
  kCapacityExhausted = 5,
  kAlreadyExists = 6,
  kProtocolError = 7,
  kConflict = 8,

  kUnavailable = 64,
  kDeadlineExceeded = 65,
  kInvalidArgument = 66,
  kInternal = 67,
};

bool IsWireCode(StatusCode code);
std::string_view StatusCodeName(StatusCode code);

class [[nodiscard]] Status {
 public:
  Status() = default;
  Status(StatusCode code, std::string message)
      : code_(code), message_(std::move(message)) {}

  static Status Ok() { return Status(); }

  bool ok() const { return code_ == StatusCode::kOk; }
  StatusCode code() const { return code_; }
  const std::string& message() const { return message_; }

  std::string ToString() const;

  bool operator==(const Status& other) const = default;

 private:
  StatusCode code_ = StatusCode::kOk;
  std::string message_;
};

std::ostream& operator<<(std::ostream& os, const Status& status);

inline Status NotFound(std::string msg) {
  return {StatusCode::kNotFound, std::move(msg)};
}
inline Status DataUnavailable(std::string msg) {
  return {StatusCode::kDataUnavailable, std::move(msg)};
}
inline Status NodeDraining(std::string msg) {
  return {StatusCode::kNodeDraining, std::move(msg)};
}
inline Status StaleLocation(std::string msg) {
  return {StatusCode::kStaleLocation, std::move(msg)};
}
inline Status CapacityExhausted(std::string msg) {
  return {StatusCode::kCapacityExhausted, std::move(msg)};
}
inline Status AlreadyExists(std::string msg) {
  return {StatusCode::kAlreadyExists, std::move(msg)};
}
inline Status ProtocolError(std::string msg) {
  return {StatusCode::kProtocolError, std::move(msg)};
}
inline Status Conflict(std::string msg) {
  return {StatusCode::kConflict, std::move(msg)};
}
inline Status Unavailable(std::string msg) {
  return {StatusCode::kUnavailable, std::move(msg)};
}
inline Status DeadlineExceeded(std::string msg) {
  return {StatusCode::kDeadlineExceeded, std::move(msg)};
}
inline Status InvalidArgument(std::string msg) {
  return {StatusCode::kInvalidArgument, std::move(msg)};
}
inline Status Internal(std::string msg) {
  return {StatusCode::kInternal, std::move(msg)};
}

// Either a value or a non-OK Status.
template <typename T>
class [[nodiscard]] Result {
 public:
  Result(T value) : rep_(std::move(value)) {}  // NOLINT
  Result(Status status) : rep_(std::move(status)) {  // NOLINT
    assert(!std::get<Status>(rep_).ok());
  }

  bool ok() const { return std::holds_alternative<T>(rep_); }

  const Status& status() const {
    static const Status kOk;
    return ok() ? kOk : std::get<Status>(rep_);
  }

  T& value() & { return std::get<T>(rep_); }
  const T& value() const& { return std::get<T>(rep_); }
  T&& value() && { return std::get<T>(std::move(rep_)); }

  T& operator*() & { return value(); }
  const T& operator*() const& { return value(); }
  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }

 private:
  std::variant<T, Status> rep_;
};

}  // namespace ess

#define ESS_CONCAT_INNER_(a, b) a##b
#define ESS_CONCAT_(a, b) ESS_CONCAT_INNER_(a, b)

#define ESS_RETURN_IF_ERROR(expr)          \
  do {                                     \
    ::ess::Status ess_status_ = (expr);    \
    if (!ess_status_.ok()) return ess_status_; \
  } while (0)

#define ESS_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                               \
  if (!tmp.ok()) return tmp.status();              \
  lhs = std::move(tmp).value()

#define ESS_ASSIGN_OR_RETURN(lhs, expr) \
  ESS_ASSIGN_OR_RETURN_IMPL_(ESS_CONCAT_(ess_result_, __LINE__), lhs, expr)

#endif  // ESS_COMMON_STATUS_H_
