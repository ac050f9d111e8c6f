// Copyright 2026 The Toskose Authors
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

#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include <json.hpp>

// XML-RPC values map onto JSON: int, boolean, double, string, array, struct
// and nil. dateTime.iso8601 and base64 decode to strings.
namespace toskose::xmlrpc {

using Value = nlohmann::json;

// Supervisor-compatible fault codes.
namespace faults {
inline constexpr int kUnknownMethod = 1;
inline constexpr int kIncorrectParameters = 2;
inline constexpr int kBadArguments = 3;
inline constexpr int kFailed = 30;
inline constexpr int kBadName = 10;
inline constexpr int kNoFile = 20;
inline constexpr int kSpawnError = 50;
inline constexpr int kAlreadyStarted = 60;
inline constexpr int kNotRunning = 70;
}  // namespace faults

class Fault : public std::runtime_error {
 public:
  Fault(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

struct MethodCall {
  std::string method;
  Value params = Value::array();
};

std::string encode_call(const std::string& method, const Value& params);
std::string encode_response(const Value& result);
std::string encode_fault(int code, const std::string& message);

// Throw Error(syntax_error) on malformed documents.
MethodCall decode_call(std::string_view xml);
// Returns the result value, or throws Fault for a fault response.
Value decode_response(std::string_view xml);

// Method table for servers. Handlers throw Fault to report errors.
class Dispatcher {
 public:
  using Handler = std::function<Value(const Value& params)>;

  void add(std::string method, Handler handler);
  std::vector<std::string> methods() const;
  // Full request body in, full response body out. Never throws.
  std::string handle(std::string_view request) const;

 private:
  std::map<std::string, Handler> handlers_;
};

struct Endpoint {
  std::string host;
  int port = 0;
  std::string user;
  std::string password;
};

struct Timeouts {
  std::chrono::milliseconds connect{3000};
  std::chrono::milliseconds read{120000};
};

// Synchronous client for POST /RPC2. Transport failures throw
// Error(unit_unreachable) or Error(operation_timeout); faults throw Fault.
class Client {
 public:
  explicit Client(Endpoint endpoint, Timeouts timeouts = {});
  ~Client();
  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  Value call(const std::string& method, const Value& params = Value::array());
  const Endpoint& endpoint() const noexcept { return endpoint_; }

 private:
  struct Impl;
  Endpoint endpoint_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace toskose::xmlrpc
