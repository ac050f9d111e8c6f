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
#include <string>
#include <vector>

#include "toskose/manager/app_model.hpp"
#include "toskose/unit/supervisor.hpp"

namespace toskose::manager {

// The calls the manager makes on a unit. Transport failures throw
// Error(unit_unreachable) or Error(operation_timeout); unit faults throw
// Error with no_such_program, already_started, not_running, spawn_failed or
// operation_failed.
class UnitClient {
 public:
  virtual ~UnitClient() = default;
  virtual unit::ProcessInfo start(const std::string& program, bool wait) = 0;
  virtual unit::ProcessInfo stop(const std::string& program, bool wait) = 0;
  virtual unit::ProcessInfo info(const std::string& program) = 0;
  virtual std::vector<unit::ProcessInfo> all_info() = 0;
  virtual std::string read_log(const std::string& program, long long offset, long long length) = 0;
};

// A concrete address for a unit: the endpoint's alias after resolution.
struct UnitAddress {
  std::string host;
  int port = 0;
  std::string user;
  std::string password;
};

using AliasResolver = std::function<UnitAddress(const UnitEndpoint&)>;

// Network DNS: the alias is the host name.
UnitAddress resolve_by_dns(const UnitEndpoint& endpoint);
// Fixed alias -> host:port table; aliases missing from it throw
// Error(unknown_alias).
AliasResolver table_resolver(std::map<std::string, std::string> table);

struct ClientTimeouts {
  std::chrono::milliseconds connect{3000};
  std::chrono::milliseconds read{30000};
};

// Client constructors keyed by protocol tag.
class ClientFactory {
 public:
  using Creator = std::function<std::unique_ptr<UnitClient>(const UnitAddress&, const ClientTimeouts&)>;

  // Knows "xmlrpc".
  static ClientFactory with_defaults();

  void add(std::string protocol, Creator creator);
  bool has(const std::string& protocol) const { return creators_.contains(protocol); }
  // Throws Error(unknown_target) for an unregistered protocol.
  std::unique_ptr<UnitClient> create(const std::string& protocol, const UnitAddress& address,
                                     const ClientTimeouts& timeouts = {}) const;

 private:
  std::map<std::string, Creator> creators_;
};

std::unique_ptr<UnitClient> make_xmlrpc_client(const UnitAddress& address, const ClientTimeouts& timeouts);

}  // namespace toskose::manager
