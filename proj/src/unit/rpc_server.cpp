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

#include "toskose/unit/rpc_server.hpp"

#include <httplib.h>

#include <cmath>
#include <thread>

#include "toskose/common/error.hpp"

namespace toskose::unit {
namespace {

using xmlrpc::Fault;
using xmlrpc::Value;
namespace faults = xmlrpc::faults;

template <typename Fn>
Value guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    switch (e.code()) {
      case Errc::no_such_program: throw Fault(faults::kBadName, "BAD_NAME: " + std::string(e.what()));
      case Errc::already_started: throw Fault(faults::kAlreadyStarted, "ALREADY_STARTED: " + std::string(e.what()));
      case Errc::not_running: throw Fault(faults::kNotRunning, "NOT_RUNNING: " + std::string(e.what()));
      case Errc::spawn_failed: throw Fault(faults::kSpawnError, "SPAWN_ERROR: " + std::string(e.what()));
      case Errc::syntax_error: throw Fault(faults::kBadArguments, "BAD_ARGUMENTS: " + std::string(e.what()));
      default: throw Fault(faults::kFailed, "FAILED: " + std::string(e.what()));
    }
  }
}

void arity(const Value& params, std::size_t min, std::size_t max) {
  if (!params.is_array() || params.size() < min || params.size() > max) {
    throw Fault(faults::kIncorrectParameters, "INCORRECT_PARAMETERS");
  }
}

std::string name_param(const Value& params) {
  if (!params[0].is_string()) throw Fault(faults::kIncorrectParameters, "INCORRECT_PARAMETERS: name must be a string");
  return params[0].get<std::string>();
}

bool wait_param(const Value& params) {
  if (params.size() < 2) return true;
  const auto& w = params[1];
  if (w.is_boolean()) return w.get<bool>();
  if (w.is_number_integer()) return w.get<long long>() != 0;
  throw Fault(faults::kIncorrectParameters, "INCORRECT_PARAMETERS: wait must be a boolean");
}

long long int_param(const Value& params, std::size_t i) {
  if (!params[i].is_number_integer()) throw Fault(faults::kIncorrectParameters, "INCORRECT_PARAMETERS: integer expected");
  return params[i].get<long long>();
}

long long epoch_seconds(double t) { return static_cast<long long>(std::floor(t)); }

}  // namespace

Value to_rpc(const ProcessInfo& info) {
  const auto now = std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();
  return Value{
      {"name", info.name},
      {"group", info.name},
      {"start", epoch_seconds(info.start_time)},
      {"stop", epoch_seconds(info.stop_time)},
      {"now", epoch_seconds(now)},
      {"state", static_cast<int>(info.state)},
      {"statename", std::string(to_string(info.state))},
      {"spawnerr", info.spawnerr},
      {"exitstatus", info.exitstatus.value_or(0)},
      {"logfile", info.stdout_log},
      {"stdout_logfile", info.stdout_log},
      {"stderr_logfile", info.stderr_log},
      {"pid", info.pid.value_or(0)},
      {"description", info.description},
  };
}

ProcessInfo from_rpc(const Value& v) {
  ProcessInfo info;
  info.name = v.value("name", std::string());
  const auto state = state_from_name(v.value("statename", std::string()));
  if (!state) fail(Errc::syntax_error, "process info with unknown state");
  info.state = *state;
  if (const auto pid = v.value("pid", 0); pid > 0) info.pid = pid;
  if (info.state == ProcessState::exited) info.exitstatus = v.value("exitstatus", 0);
  info.start_time = v.value("start", 0.0);
  info.stop_time = v.value("stop", 0.0);
  info.spawnerr = v.value("spawnerr", std::string());
  info.description = v.value("description", std::string());
  info.stdout_log = v.value("stdout_logfile", std::string());
  info.stderr_log = v.value("stderr_logfile", std::string());
  return info;
}

xmlrpc::Dispatcher make_dispatcher(Supervisor& sup) {
  xmlrpc::Dispatcher d;
  d.add("supervisor.startProcess", [&sup](const Value& params) {
    arity(params, 1, 2);
    return guarded([&] {
      sup.start(name_param(params), wait_param(params));
      return Value(true);
    });
  });
  d.add("supervisor.stopProcess", [&sup](const Value& params) {
    arity(params, 1, 2);
    return guarded([&] {
      sup.stop(name_param(params), wait_param(params));
      return Value(true);
    });
  });
  d.add("supervisor.getProcessInfo", [&sup](const Value& params) {
    arity(params, 1, 1);
    return guarded([&] { return to_rpc(sup.info(name_param(params))); });
  });
  d.add("supervisor.getAllProcessInfo", [&sup](const Value& params) {
    arity(params, 0, 0);
    Value out = Value::array();
    for (const auto& info : sup.all_info()) out.push_back(to_rpc(info));
    return out;
  });
  d.add("supervisor.readProcessStdoutLog", [&sup](const Value& params) {
    arity(params, 3, 3);
    return guarded([&] {
      return Value(sup.read_stdout(name_param(params), int_param(params, 1), int_param(params, 2)));
    });
  });
  return d;
}

struct RpcServer::Impl {
  Supervisor& supervisor;
  HttpSettings http;
  xmlrpc::Dispatcher dispatcher;
  httplib::Server server;
  std::thread thread;

  Impl(Supervisor& s, HttpSettings h) : supervisor(s), http(std::move(h)), dispatcher(make_dispatcher(s)) {}
};

RpcServer::RpcServer(Supervisor& supervisor, HttpSettings http)
    : impl_(std::make_unique<Impl>(supervisor, std::move(http))) {
  auto& impl = *impl_;
  const std::string expected =
      impl.http.user.empty() && impl.http.password.empty()
          ? std::string()
          : "Basic " + httplib::detail::base64_encode(impl.http.user + ":" + impl.http.password);
  impl.server.Post("/RPC2", [&impl, expected](const httplib::Request& req, httplib::Response& res) {
    if (!expected.empty() && req.get_header_value("Authorization") != expected) {
      res.status = 401;
      res.set_header("WWW-Authenticate", "Basic realm=\"default\"");
      res.set_content("Unauthorized", "text/plain");
      return;
    }
    res.set_content(impl.dispatcher.handle(req.body), "text/xml");
  });
}

RpcServer::~RpcServer() { stop(); }

int RpcServer::start() {
  auto& impl = *impl_;
  const std::string host = impl.http.host.empty() ? "0.0.0.0" : impl.http.host;
  if (impl.http.port == 0) {
    port_ = impl.server.bind_to_any_port(host);
    if (port_ <= 0) fail(Errc::io_error, "cannot bind RPC listener on " + host);
  } else {
    if (!impl.server.bind_to_port(host, impl.http.port)) {
      fail(Errc::io_error, "cannot bind RPC listener on " + host + ":" + std::to_string(impl.http.port));
    }
    port_ = impl.http.port;
  }
  impl.thread = std::thread([&impl] { impl.server.listen_after_bind(); });
  impl.server.wait_until_ready();
  return port_;
}

void RpcServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace toskose::unit
