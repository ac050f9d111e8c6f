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

#include "toskose/common/error.hpp"

namespace toskose {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::bad_extension: return "BadExtension";
    case Errc::missing_metadata: return "MissingMetadata";
    case Errc::missing_entry_definitions: return "MissingEntryDefinitions";
    case Errc::corrupt_archive: return "CorruptArchive";
    case Errc::syntax_error: return "SyntaxError";
    case Errc::unknown_node_type: return "UnknownNodeType";
    case Errc::unresolved_target: return "UnresolvedTarget";
    case Errc::invalid_relationship: return "InvalidRelationship";
    case Errc::unknown_key: return "UnknownKey";
    case Errc::type_mismatch: return "TypeMismatch";
    case Errc::not_a_hosting_container: return "NotAHostingContainer";
    case Errc::missing_artifact: return "MissingArtifact";
    case Errc::builder_unavailable: return "BuilderUnavailable";
    case Errc::build_failed: return "BuildFailed";
    case Errc::validation_failed: return "ValidationFailed";
    case Errc::unresolved_env_var: return "UnresolvedEnvVar";
    case Errc::duplicate_program: return "DuplicateProgram";
    case Errc::no_such_program: return "NoSuchProgram";
    case Errc::already_started: return "AlreadyStarted";
    case Errc::not_running: return "NotRunning";
    case Errc::spawn_failed: return "SpawnFailed";
    case Errc::unknown_target: return "UnknownTarget";
    case Errc::unit_unreachable: return "UnitUnreachable";
    case Errc::operation_timeout: return "OperationTimeout";
    case Errc::operation_failed: return "OperationFailed";
    case Errc::conflict: return "Conflict";
    case Errc::port_exhausted: return "PortExhausted";
    case Errc::unit_failed_to_start: return "UnitFailedToStart";
    case Errc::unknown_alias: return "UnknownAlias";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

}  // namespace toskose
