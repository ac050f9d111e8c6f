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
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace toskose::unit {

struct HttpSettings {
  std::string host;  // empty: all interfaces
  int port = 0;
  std::string user;
  std::string password;

  friend bool operator==(const HttpSettings&, const HttpSettings&) = default;
};

struct SupervisorSettings {
  std::string log_level = "INFO";
  std::filesystem::path logfile;
  std::filesystem::path childlogdir;

  friend bool operator==(const SupervisorSettings&, const SupervisorSettings&) = default;
};

struct ProgramSpec {
  std::string name;
  std::vector<std::string> command;
  std::filesystem::path directory;
  std::map<std::string, std::string> environment;
  bool autostart = false;
  bool autorestart = false;
  double startsecs = 1.0;
  std::set<int> exitcodes{0};
  double stopwaitsecs = 10.0;  // grace before the kill signal
  std::filesystem::path stdout_log;
  std::filesystem::path stderr_log;

  friend bool operator==(const ProgramSpec&, const ProgramSpec&) = default;
};

struct UnitConfig {
  HttpSettings http;
  SupervisorSettings supervisor;
  std::map<std::string, ProgramSpec> programs;

  friend bool operator==(const UnitConfig&, const UnitConfig&) = default;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

// Reads the calling process environment.
EnvLookup process_environment();

// Parse an INI-style supervisor configuration.
//
// `${NAME}` is replaced from `env`; `%(here)s` by `here`, `%(ENV_NAME)s` from
// `env`, `%%` by `%` and `$$` by `$`. Log paths default to
// `<childlogdir>/<program>/stdout.log` (and stderr.log).
//
// Throws Error with syntax_error, unresolved_env_var or duplicate_program.
UnitConfig load_unit_config(const std::string& document, const EnvLookup& env,
                            const std::filesystem::path& here);

// Reads `path`, expanding from the process environment, here = parent dir.
UnitConfig load_unit_config_file(const std::filesystem::path& path);

// Shell-style word splitting with single/double quotes and backslashes.
std::vector<std::string> split_command(const std::string& text);

// KEY="value",KEY2=value2
std::map<std::string, std::string> parse_environment(const std::string& text);

}  // namespace toskose::unit
