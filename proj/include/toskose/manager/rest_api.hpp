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

#include <filesystem>
#include <memory>
#include <string>

#include "toskose/common/error.hpp"
#include "toskose/manager/app_manager.hpp"

namespace toskose::manager {

inline constexpr std::string_view kApiRoot = "/api/v1";

struct RestSettings {
  std::string host;  // empty: all interfaces
  int port = 0;      // 0: any free port
  // Basic auth is enforced on /api when `authenticate` is set.
  bool authenticate = true;
  std::string user;
  std::string password;
  // Static dashboard bundle mounted at /ui when the directory exists.
  std::filesystem::path ui_dir;
};

// HTTP status for an error raised by AppManager.
int http_status(Errc code) noexcept;
int http_status(Outcome outcome) noexcept;

class RestServer {
 public:
  RestServer(AppManager& manager, RestSettings settings);
  ~RestServer();

  RestServer(const RestServer&) = delete;
  RestServer& operator=(const RestServer&) = delete;

  // Returns the bound port. Throws Error(io_error) when binding fails.
  int start();
  void stop();
  int port() const noexcept { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace toskose::manager
