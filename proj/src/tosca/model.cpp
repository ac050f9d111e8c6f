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

#include "toskose/tosca/model.hpp"

#include <algorithm>

namespace toskose::tosca {
namespace {

bool ends_with_type(std::string_view type, std::string_view base) {
  if (type == base) return true;
  return type.size() > base.size() && type.ends_with(base) &&
         type[type.size() - base.size() - 1] == '.';
}

std::optional<NodeKind> base_kind(std::string_view type) {
  if (ends_with_type(type, kContainerType)) return NodeKind::container;
  if (ends_with_type(type, kSoftwareType)) return NodeKind::software;
  if (ends_with_type(type, kVolumeType)) return NodeKind::volume;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::container: return "CONTAINER";
    case NodeKind::software: return "SOFTWARE";
    case NodeKind::volume: return "VOLUME";
  }
  return "?";
}

std::string_view to_string(RelKind kind) noexcept {
  switch (kind) {
    case RelKind::hosted_on: return "HOSTED_ON";
    case RelKind::connects_to: return "CONNECTS_TO";
    case RelKind::attaches_to: return "ATTACHES_TO";
    case RelKind::depends_on: return "DEPENDS_ON";
  }
  return "?";
}

std::string_view type_name(RelKind kind) noexcept {
  switch (kind) {
    case RelKind::hosted_on: return "tosca.relationships.HostedOn";
    case RelKind::connects_to: return "tosca.relationships.ConnectsTo";
    case RelKind::attaches_to: return "tosca.relationships.AttachesTo";
    case RelKind::depends_on: return "tosca.relationships.DependsOn";
  }
  return "?";
}

bool is_standard_operation(std::string_view name) noexcept {
  return std::find(std::begin(kStandardOperations), std::end(kStandardOperations),
                   name) != std::end(kStandardOperations);
}

bool ArtifactRef::is_image() const noexcept {
  return type.ends_with("Image");
}

const OperationDef* LifecycleInterface::find(std::string_view name) const noexcept {
  for (const auto& op : operations) {
    if (op.name == name) return &op;
  }
  return nullptr;
}

std::vector<std::string> LifecycleInterface::names() const {
  std::vector<std::string> out;
  out.reserve(operations.size());
  for (const auto& op : operations) out.push_back(op.name);
  return out;
}

const ArtifactRef* NodeTemplate::image() const noexcept {
  for (const auto& a : artifacts) {
    if (a.is_image()) return &a;
  }
  return nullptr;
}

const NodeTemplate* ServiceTemplate::find(std::string_view node) const noexcept {
  for (const auto& n : nodes) {
    if (n.name == node) return &n;
  }
  return nullptr;
}

NodeTemplate* ServiceTemplate::find(std::string_view node) noexcept {
  for (auto& n : nodes) {
    if (n.name == node) return &n;
  }
  return nullptr;
}

const NodeType* ServiceTemplate::find_type(std::string_view type) const noexcept {
  for (const auto& t : node_types) {
    if (t.name == type) return &t;
  }
  return nullptr;
}

std::vector<const RelationshipInstance*> ServiceTemplate::outgoing(
    std::string_view node) const {
  std::vector<const RelationshipInstance*> out;
  for (const auto& r : relationships) {
    if (r.source == node) out.push_back(&r);
  }
  return out;
}

std::vector<const RelationshipInstance*> ServiceTemplate::outgoing(
    std::string_view node, RelKind kind) const {
  std::vector<const RelationshipInstance*> out;
  for (const auto& r : relationships) {
    if (r.source == node && r.kind == kind) out.push_back(&r);
  }
  return out;
}

std::vector<std::string> ServiceTemplate::allowed_operations(
    const NodeTemplate& node) const {
  std::vector<std::string> out(std::begin(kStandardOperations),
                               std::end(kStandardOperations));
  std::string_view type = node.type_name;
  for (int depth = 0; depth < 32; ++depth) {
    const auto* declared = find_type(type);
    if (declared == nullptr) break;
    for (const auto& op : declared->operations) {
      if (std::find(out.begin(), out.end(), op) == out.end()) out.push_back(op);
    }
    type = declared->derived_from;
  }
  return out;
}

std::optional<NodeKind> resolve_kind(std::string_view type,
                                     const std::vector<NodeType>& declared) {
  for (int depth = 0; depth < 32; ++depth) {
    if (auto kind = base_kind(type)) return kind;
    auto it = std::find_if(declared.begin(), declared.end(),
                           [&](const NodeType& t) { return t.name == type; });
    if (it == declared.end()) return std::nullopt;
    type = it->derived_from;
  }
  return std::nullopt;
}

}  // namespace toskose::tosca
