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

#include <stdexcept>
#include <string>
#include <string_view>

namespace toskose {

// Fault kinds raised across the toolchain. Validation problems are reported
// as diagnostics instead; these are for inputs that cannot be processed.
enum class Errc {
  // CSAR / template
  bad_extension,
  missing_metadata,
  missing_entry_definitions,
  corrupt_archive,
  syntax_error,
  unknown_node_type,
  unresolved_target,
  invalid_relationship,
  // Toskose config
  unknown_key,
  type_mismatch,
  // packager
  not_a_hosting_container,
  missing_artifact,
  builder_unavailable,
  build_failed,
  validation_failed,
  // unit
  unresolved_env_var,
  duplicate_program,
  no_such_program,
  already_started,
  not_running,
  spawn_failed,
  // manager / transport
  unknown_target,
  unit_unreachable,
  operation_timeout,
  operation_failed,
  conflict,
  // harness
  port_exhausted,
  unit_failed_to_start,
  unknown_alias,
  io_error,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace toskose
