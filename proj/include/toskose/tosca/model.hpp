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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace toskose::tosca {

// Property and input values keep the document's structure; scalars are kept
// as their literal text so they can be exported verbatim.
using Value = nlohmann::ordered_json;

enum class NodeKind { container, software, volume };
enum class RelKind { hosted_on, connects_to, attaches_to, depends_on };

std::string_view to_string(NodeKind kind) noexcept;
std::string_view to_string(RelKind kind) noexcept;
// Normative relationship type name, e.g. "tosca.relationships.HostedOn".
std::string_view type_name(RelKind kind) noexcept;

inline constexpr std::string_view kContainerType = "tosker.nodes.Container";
inline constexpr std::string_view kSoftwareType = "tosker.nodes.Software";
inline constexpr std::string_view kVolumeType = "tosker.nodes.Volume";
inline constexpr std::string_view kImplementationType = "tosca.artifacts.Implementation";

// The TOSCA standard lifecycle operations, in execution order.
inline constexpr std::string_view kStandardOperations[] = {
    "create", "configure", "start", "stop", "delete"};
bool is_standard_operation(std::string_view name) noexcept;

struct ArtifactRef {
  std::string name;
  std::string path;  // CSAR-relative file path, or an image reference
  std::string type;

  bool is_image() const noexcept;

  friend bool operator==(const ArtifactRef&, const ArtifactRef&) = default;
};

struct OperationDef {
  std::string name;
  ArtifactRef implementation;
  Value inputs = Value::object();

  friend bool operator==(const OperationDef&, const OperationDef&) = default;
};

// Operations in declaration order.
struct LifecycleInterface {
  std::vector<OperationDef> operations;

  const OperationDef* find(std::string_view name) const noexcept;
  std::vector<std::string> names() const;

  friend bool operator==(const LifecycleInterface&, const LifecycleInterface&) = default;
};

struct NodeTemplate {
  std::string name;
  std::string type_name;
  NodeKind kind = NodeKind::software;
  Value properties = Value::object();
  std::vector<ArtifactRef> artifacts;
  LifecycleInterface interface;

  // First artifact tagged as an image, if any.
  const ArtifactRef* image() const noexcept;

  friend bool operator==(const NodeTemplate&, const NodeTemplate&) = default;
};

struct RelationshipInstance {
  RelKind kind = RelKind::depends_on;
  std::string source;
  std::string target;
  std::string location;  // ATTACHES_TO only

  friend bool operator==(const RelationshipInstance&, const RelationshipInstance&) = default;
};

// A node type declared by the template itself, e.g. an extension of
// tosker.nodes.Software adding a push_default operation.
struct NodeType {
  std::string name;
  std::string derived_from;
  std::vector<std::string> operations;

  friend bool operator==(const NodeType&, const NodeType&) = default;
};

struct ServiceTemplate {
  std::string name;
  std::string description;
  std::vector<NodeType> node_types;
  std::vector<NodeTemplate> nodes;  // declaration order
  std::vector<RelationshipInstance> relationships;
  Value inputs = Value::object();

  const NodeTemplate* find(std::string_view node) const noexcept;
  NodeTemplate* find(std::string_view node) noexcept;
  const NodeType* find_type(std::string_view type) const noexcept;

  std::vector<const RelationshipInstance*> outgoing(std::string_view node) const;
  std::vector<const RelationshipInstance*> outgoing(std::string_view node, RelKind kind) const;

  // Operation names a node may declare: the standard set plus every
  // extension declared along its type's derivation chain.
  std::vector<std::string> allowed_operations(const NodeTemplate& node) const;

  friend bool operator==(const ServiceTemplate&, const ServiceTemplate&) = default;
};

// Resolve a type name to its TosKer base kind by walking derived_from links
// and suffix-matching the TosKer type names.
std::optional<NodeKind> resolve_kind(std::string_view type,
                                     const std::vector<NodeType>& declared);

}  // namespace toskose::tosca
