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

#include "toskose/manager/unit_client.hpp"

#include "toskose/common/error.hpp"
#include "toskose/unit/rpc_server.hpp"
#include "toskose/xmlrpc/xmlrpc.hpp"

namespace toskose::manager {
namespace {

using xmlrpc::Value;

class XmlRpcUnitClient final : public UnitClient {
 public:
  XmlRpcUnitClient(const UnitAddress& a, const ClientTimeouts& t)
      : client_({a.host, a.port, a.user, a.password}, {t.connect, t.read}) {}

  unit::ProcessInfo start(const std::string& program, bool wait) override {
    call("supervisor.startProcess", Value::array({program, wait}));
    return info(program);
  }

  unit::ProcessInfo stop(const std::string& program, bool wait) override {
    call("supervisor.stopProcess", Value::array({program, wait}));
    return info(program);
  }

  unit::ProcessInfo info(const std::string& program) override {
    return unit::from_rpc(call("supervisor.getProcessInfo", Value::array({program})));
  }

  std::vector<unit::ProcessInfo> all_info() override {
    std::vector<unit::ProcessInfo> out;
    for (const auto& v : call("supervisor.getAllProcessInfo", Value::array())) out.push_back(unit::from_rpc(v));
    return out;
  }

  std::string read_log(const std::string& program, long long offset, long long length) override {
    return call("supervisor.readProcessStdoutLog", Value::array({program, offset, length})).get<std::string>();
  }

 private:
  Value call(const std::string& method, const Value& params) {
    try {
      return client_.call(method, params);
    } catch (const xmlrpc::Fault& f) {
      switch (f.code()) {
        case xmlrpc::faults::kBadName: fail(Errc::no_such_program, f.what());
        case xmlrpc::faults::kAlreadyStarted: fail(Errc::already_started, f.what());
        case xmlrpc::faults::kNotRunning: fail(Errc::not_running, f.what());
        case xmlrpc::faults::kSpawnError: fail(Errc::spawn_failed, f.what());
        default: fail(Errc::operation_failed, f.what());
      }
    }
  }

  xmlrpc::Client client_;
};

}  // namespace

UnitAddress resolve_by_dns(const UnitEndpoint& e) { return {e.alias, e.port, e.user, e.password}; }

AliasResolver table_resolver(std::map<std::string, std::string> table) {
  return [table = std::move(table)](const UnitEndpoint& e) {
    const auto it = table.find(e.alias);
    if (it == table.end()) fail(Errc::unknown_alias, "no address for alias " + e.alias);
    const auto colon = it->second.rfind(':');
    if (colon == std::string::npos) fail(Errc::unknown_alias, "bad address for alias " + e.alias + ": " + it->second);
    return UnitAddress{it->second.substr(0, colon), std::stoi(it->second.substr(colon + 1)), e.user, e.password};
  };
}

std::unique_ptr<UnitClient> make_xmlrpc_client(const UnitAddress& address, const ClientTimeouts& timeouts) {
  return std::make_unique<XmlRpcUnitClient>(address, timeouts);
}

ClientFactory ClientFactory::with_defaults() {
  ClientFactory f;
  f.add("xmlrpc", make_xmlrpc_client);
  return f;
}

void ClientFactory::add(std::string protocol, Creator creator) { creators_[std::move(protocol)] = std::move(creator); }

std::unique_ptr<UnitClient> ClientFactory::create(const std::string& protocol, const UnitAddress& address,
                                                  const ClientTimeouts& timeouts) const {
  const auto it = creators_.find(protocol);
  if (it == creators_.end()) fail(Errc::unknown_target, "no client for protocol " + protocol);
  return it->second(address, timeouts);
}

}  // namespace toskose::manager
