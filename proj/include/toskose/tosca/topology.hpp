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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "toskose/common/diagnostics.hpp"
#include "toskose/tosca/model.hpp"

namespace toskose::tosca {

// Diagnostic codes produced by validate_topology().
namespace diag {
inline constexpr std::string_view kUnresolvedTarget = "unresolved-target";
inline constexpr std::string_view kDuplicateNode = "duplicate-node";
inline constexpr std::string_view kContainerProperty = "container-property";
inline constexpr std::string_view kSoftwareWithoutHost = "software-without-host";
inline constexpr std::string_view kSoftwareMultipleHosts = "software-multiple-hosts";
inline constexpr std::string_view kVolumeOutgoing = "volume-outgoing-relationship";
inline constexpr std::string_view kInvalidRelationship = "invalid-relationship";
inline constexpr std::string_view kAttachMissingLocation = "attach-missing-location";
inline constexpr std::string_view kHostCycle = "host-cycle";
inline constexpr std::string_view kHostChainUnterminated = "host-chain-unterminated";
inline constexpr std::string_view kUnknownOperation = "unknown-operation";
inline constexpr std::string_view kArtifactPath = "artifact-path";
}  // namespace diag

inline constexpr std::string_view kContainerProperties[] = {
    "ports", "env_variables", "command", "share_data"};

// Every violated structural invariant, as data. Clean iff the topology is
// well typed and every software host chain ends at a container.
ValidationReport validate_topology(const ServiceTemplate& t);

struct NodeClassification {
  // container -> hosted software, ordered by host-chain depth then name.
  std::map<std::string, std::vector<std::string>> hosting;
  std::set<std::string> standalone;
  // software -> the container at the end of its host chain.
  std::map<std::string, std::string> host_container;

  bool is_hosting(const std::string& container) const { return hosting.contains(container); }
  bool is_standalone(const std::string& container) const { return standalone.contains(container); }
};

// Precondition: validate_topology(t).clean().
NodeClassification classify_nodes(const ServiceTemplate& t);

}  // namespace toskose::tosca
