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

#include <sys/types.h>

#include <chrono>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "toskose/packager/compose.hpp"

namespace toskose::harness {

namespace stdfs = std::filesystem;

// Stand-ins for standalone services, since no container engine runs them.
// `${STUB_PORT}` in a command is replaced by a free local port.
struct StubSpec {
  std::string command;
};

struct Manifest {
  std::map<std::string, StubSpec> stubs;
};

// stubs: {<service>: {command: <shell command>}}. Throws Error(syntax_error).
Manifest parse_manifest(const std::string& document);

enum class Role { unit, manager, stub };
std::string_view to_string(Role r) noexcept;

struct LocalProcess {
  std::string service;
  Role role = Role::unit;
  pid_t pid = 0;
  std::string address;  // listener, host:port; empty when none
  stdfs::path log;
};

struct Deployment {
  packager::ComposeModel compose;
  stdfs::path root;
  std::map<std::string, std::string> alias_table;  // alias -> host:port
  std::map<std::string, stdfs::path> sandboxes;
  std::vector<LocalProcess> processes;  // launch order
  std::set<std::string> stubs;
  bool torn_down = false;

  const LocalProcess* find(std::string_view service) const noexcept;

  nlohmann::json to_json() const;
  static Deployment from_json(const nlohmann::json& j);
};

struct LaunchOptions {
  // Sandboxes go below; created when missing.
  stdfs::path root;
  stdfs::path unit_binary;
  stdfs::path manager_binary;
  Manifest manifest;
  std::string host = "127.0.0.1";
  std::chrono::milliseconds ready_timeout{15000};
};

// Runs every service of `compose` as local processes: a unit per hosting
// service, the manager, and a stub per standalone service listed in the
// manifest. `contexts` holds one build context directory per service
// (artifact directories from the packager use <dir>/<service>).
//
// Listener ports are remapped to free local ports and published through the
// alias table; the manager resolves unit aliases only through it.
//
// Throws Error with port_exhausted, unit_failed_to_start (message carries
// the process output) or io_error. Nothing is left running on failure.
Deployment launch_local(const packager::ComposeModel& compose, const std::map<std::string, stdfs::path>& contexts,
                        const LaunchOptions& options);

// host:port for an alias. Throws Error(unknown_alias).
std::string resolve_alias(const Deployment& d, const std::string& alias);

// Terminate in reverse launch order (units stop their programs first),
// then remove the sandboxes. Idempotent.
void teardown(Deployment& d, std::chrono::milliseconds grace = std::chrono::milliseconds(20000));

}  // namespace toskose::harness
