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

#include <memory>
#include <string>

#include "toskose/unit/supervisor.hpp"
#include "toskose/xmlrpc/xmlrpc.hpp"

namespace toskose::unit {

// Supervisor-compatible subset of the XML-RPC API, bound to a Supervisor.
xmlrpc::Dispatcher make_dispatcher(Supervisor& supervisor);

xmlrpc::Value to_rpc(const ProcessInfo& info);
ProcessInfo from_rpc(const xmlrpc::Value& v);

// HTTP listener serving POST /RPC2 with Basic auth when credentials are set.
class RpcServer {
 public:
  RpcServer(Supervisor& supervisor, HttpSettings http);
  ~RpcServer();

  RpcServer(const RpcServer&) = delete;
  RpcServer& operator=(const RpcServer&) = delete;

  // Bind (port 0 picks a free port) and serve on a background thread.
  // Returns the bound port. Throws Error(io_error) when binding fails.
  int start();
  void stop();
  int port() const noexcept { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace toskose::unit
