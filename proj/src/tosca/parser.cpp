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

#include "toskose/tosca/parser.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>

#include "toskose/common/error.hpp"
#include "toskose/common/yaml.hpp"

namespace toskose::tosca {
namespace {

constexpr std::string_view kFileArtifactType = "tosca.artifacts.File";

struct RequirementKind {
  std::string_view requirement;
  RelKind kind;
};

constexpr RequirementKind kRequirements[] = {
    {"host", RelKind::hosted_on},
    {"connection", RelKind::connects_to},
    {"dependency", RelKind::depends_on},
    {"storage", RelKind::attaches_to},
};

std::string_view requirement_for(RelKind kind) {
  for (const auto& r : kRequirements) {
    if (r.kind == kind) return r.requirement;
  }
  return "dependency";
}

std::optional<RelKind> rel_kind_from_type(std::string_view type) {
  for (RelKind k : {RelKind::hosted_on, RelKind::connects_to, RelKind::attaches_to,
                    RelKind::depends_on}) {
    auto full = type_name(k);
    auto shortname = full.substr(full.rfind('.') + 1);
    if (type == full || type == shortname || type.ends_with("." + std::string(shortname))) {
      return k;
    }
  }
  return std::nullopt;
}

std::string scalar(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) fail(Errc::syntax_error, what + " must be a scalar");
  return n.Scalar();
}

void expect_map(const YAML::Node& n, const std::string& what) {
  if (n && !n.IsNull() && !n.IsMap()) fail(Errc::syntax_error, what + " must be a mapping");
}

Value resolve_inputs(const Value& v, const Value& template_inputs) {
  if (v.is_object() && v.size() == 1 && v.contains("get_input")) {
    const auto& key = v["get_input"];
    if (!key.is_string() || !template_inputs.contains(key.get<std::string>())) {
      fail(Errc::syntax_error, "get_input references an undeclared input: " + key.dump());
    }
    const auto& decl = template_inputs[key.get<std::string>()];
    if (decl.is_object()) {
      if (decl.contains("default")) return decl["default"];
      if (decl.contains("value")) return decl["value"];
      fail(Errc::syntax_error, "input '" + key.get<std::string>() + "' has no default");
    }
    return decl;
  }
  if (v.is_object()) {
    Value out = Value::object();
    for (const auto& [k, item] : v.items()) out[k] = resolve_inputs(item, template_inputs);
    return out;
  }
  if (v.is_array()) {
    Value out = Value::array();
    for (const auto& item : v) out.push_back(resolve_inputs(item, template_inputs));
    return out;
  }
  return v;
}

std::vector<std::string> declared_operations(const YAML::Node& interfaces) {
  std::vector<std::string> out;
  if (!interfaces || !interfaces.IsMap()) return out;
  for (const auto& iface : interfaces) {
    if (!iface.second.IsMap()) continue;
    for (const auto& op : iface.second) {
      auto name = op.first.as<std::string>();
      if (name == "type" || name == "inputs") continue;
      if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    }
  }
  return out;
}

ArtifactRef parse_artifact(const std::string& name, const YAML::Node& n) {
  if (n.IsScalar()) return {name, n.Scalar(), std::string(kFileArtifactType)};
  if (!n.IsMap() || !n["file"]) {
    fail(Errc::syntax_error, "artifact '" + name + "' needs a file");
  }
  ArtifactRef a{name, scalar(n["file"], "artifact file"), std::string(kFileArtifactType)};
  if (n["type"]) a.type = scalar(n["type"], "artifact type");
  return a;
}

LifecycleInterface parse_interfaces(const std::string& node, const YAML::Node& interfaces,
                                    const Value& template_inputs) {
  LifecycleInterface out;
  if (!interfaces || interfaces.IsNull()) return out;
  expect_map(interfaces, "interfaces of " + node);
  for (const auto& iface : interfaces) {
    expect_map(iface.second, "interface " + iface.first.as<std::string>());
    if (!iface.second.IsMap()) continue;
    for (const auto& item : iface.second) {
      auto name = item.first.as<std::string>();
      if (name == "type" || name == "inputs") continue;
      const auto& body = item.second;
      OperationDef op;
      op.name = name;
      op.implementation = {name, {}, std::string(kImplementationType)};
      if (body.IsScalar()) {
        op.implementation.path = body.Scalar();
      } else if (body.IsMap()) {
        const auto& impl = body["implementation"];
        if (impl && impl.IsScalar()) {
          op.implementation.path = impl.Scalar();
        } else if (impl && impl.IsMap() && impl["primary"]) {
          op.implementation.path = scalar(impl["primary"], "implementation primary");
        }
        if (body["inputs"]) {
          expect_map(body["inputs"], "inputs of " + node + "." + name);
          op.inputs = resolve_inputs(yaml::to_value(body["inputs"]), template_inputs);
          if (op.inputs.is_null()) op.inputs = Value::object();
        }
      }
      // Operations without an implementation are declarations only.
      if (op.implementation.path.empty()) continue;
      if (out.find(name) != nullptr) {
        fail(Errc::syntax_error, "operation '" + name + "' declared twice on " + node);
      }
      out.operations.push_back(std::move(op));
    }
  }
  return out;
}

RelationshipInstance parse_requirement(const std::string& source, const YAML::Node& req) {
  if (!req.IsMap() || req.size() != 1) {
    fail(Errc::syntax_error, "requirement of " + source + " must be a single-key mapping");
  }
  auto it = req.begin();
  const auto req_name = it->first.as<std::string>();
  const YAML::Node& body = it->second;

  RelationshipInstance rel;
  rel.source = source;
  std::optional<RelKind> kind;
  for (const auto& r : kRequirements) {
    if (r.requirement == req_name) kind = r.kind;
  }

  if (body.IsScalar()) {
    rel.target = body.Scalar();
  } else if (body.IsMap()) {
    if (!body["node"]) fail(Errc::syntax_error, "requirement '" + req_name + "' of " + source + " names no node");
    rel.target = scalar(body["node"], "requirement node");
    const auto& r = body["relationship"];
    if (r && r.IsScalar()) {
      kind = rel_kind_from_type(r.Scalar());
      if (!kind) fail(Errc::syntax_error, "unknown relationship type " + r.Scalar());
    } else if (r && r.IsMap()) {
      if (r["type"]) {
        kind = rel_kind_from_type(scalar(r["type"], "relationship type"));
        if (!kind) fail(Errc::syntax_error, "unknown relationship type " + r["type"].Scalar());
      }
      if (r["properties"] && r["properties"]["location"]) {
        rel.location = scalar(r["properties"]["location"], "location");
      }
    }
  } else {
    fail(Errc::syntax_error, "malformed requirement '" + req_name + "' of " + source);
  }
  if (!kind) fail(Errc::syntax_error, "cannot infer relationship for requirement '" + req_name + "' of " + source);
  rel.kind = *kind;
  return rel;
}

void check_relationship_kinds(const ServiceTemplate& t, const RelationshipInstance& rel) {
  const auto* s = t.find(rel.source);
  const auto* d = t.find(rel.target);
  auto bad = [&](const std::string& why) {
    fail(Errc::invalid_relationship, std::string(to_string(rel.kind)) + " " + rel.source +
                                         " -> " + rel.target + ": " + why);
  };
  const bool s_host = s->kind != NodeKind::volume;
  const bool d_host = d->kind != NodeKind::volume;
  switch (rel.kind) {
    case RelKind::attaches_to:
      if (s->kind != NodeKind::container || d->kind != NodeKind::volume)
        bad("AttachesTo links a container to a volume");
      break;
    case RelKind::hosted_on:
      if (s->kind != NodeKind::software || !d_host)
        bad("HostedOn links a software component to a software component or container");
      break;
    case RelKind::connects_to:
    case RelKind::depends_on:
      if (!s_host || !d_host) bad("endpoints must be software components or containers");
      break;
  }
}

}  // namespace

ServiceTemplate parse_service_template(const std::string& document,
                                       std::string_view fallback_name) {
  const YAML::Node root = yaml::load(document, "service template");
  ServiceTemplate t;
  t.name = std::string(fallback_name);
  if (!root || root.IsNull()) return t;
  if (!root.IsMap()) fail(Errc::syntax_error, "service template must be a mapping");

  if (const auto& meta = root["metadata"]; meta && meta.IsMap() && meta["template_name"]) {
    t.name = scalar(meta["template_name"], "template_name");
  }
  if (root["description"]) t.description = scalar(root["description"], "description");

  if (const auto& types = root["node_types"]; types && !types.IsNull()) {
    expect_map(types, "node_types");
    for (const auto& kv : types) {
      NodeType nt;
      nt.name = kv.first.as<std::string>();
      if (kv.second.IsMap()) {
        if (kv.second["derived_from"]) nt.derived_from = scalar(kv.second["derived_from"], "derived_from");
        nt.operations = declared_operations(kv.second["interfaces"]);
      }
      t.node_types.push_back(std::move(nt));
    }
  }

  const YAML::Node topology = root["topology_template"];
  if (!topology || topology.IsNull()) return t;
  expect_map(topology, "topology_template");

  if (topology["inputs"] && !topology["inputs"].IsNull()) {
    expect_map(topology["inputs"], "inputs");
    t.inputs = yaml::to_value(topology["inputs"]);
  }

  const YAML::Node templates = topology["node_templates"];
  if (!templates || templates.IsNull()) return t;
  expect_map(templates, "node_templates");

  for (const auto& kv : templates) {
    NodeTemplate node;
    node.name = kv.first.as<std::string>();
    const auto& body = kv.second;
    if (!body.IsMap() || !body["type"]) {
      fail(Errc::syntax_error, "node template '" + node.name + "' has no type");
    }
    node.type_name = scalar(body["type"], "type of " + node.name);
    auto kind = resolve_kind(node.type_name, t.node_types);
    if (!kind) {
      fail(Errc::unknown_node_type,
           "node '" + node.name + "' has unknown type " + node.type_name);
    }
    node.kind = *kind;
    if (body["properties"] && !body["properties"].IsNull()) {
      expect_map(body["properties"], "properties of " + node.name);
      node.properties = yaml::to_value(body["properties"]);
    }
    if (const auto& arts = body["artifacts"]; arts && !arts.IsNull()) {
      expect_map(arts, "artifacts of " + node.name);
      for (const auto& a : arts) {
        node.artifacts.push_back(parse_artifact(a.first.as<std::string>(), a.second));
      }
    }
    node.interface = parse_interfaces(node.name, body["interfaces"], t.inputs);
    t.nodes.push_back(std::move(node));
  }

  for (const auto& kv : templates) {
    const auto source = kv.first.as<std::string>();
    const auto& reqs = kv.second["requirements"];
    if (!reqs || reqs.IsNull()) continue;
    if (!reqs.IsSequence()) fail(Errc::syntax_error, "requirements of " + source + " must be a list");
    for (const auto& req : reqs) {
      auto rel = parse_requirement(source, req);
      if (t.find(rel.target) == nullptr) {
        fail(Errc::unresolved_target,
             "node '" + source + "' requires unknown node '" + rel.target + "'");
      }
      check_relationship_kinds(t, rel);
      t.relationships.push_back(std::move(rel));
    }
  }
  return t;
}

std::string serialize_service_template(const ServiceTemplate& t) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "tosca_definitions_version" << YAML::Value << "tosca_simple_yaml_1_0";
  out << YAML::Key << "metadata" << YAML::Value << YAML::BeginMap
      << YAML::Key << "template_name" << YAML::Value << t.name << YAML::EndMap;
  if (!t.description.empty()) out << YAML::Key << "description" << YAML::Value << t.description;

  if (!t.node_types.empty()) {
    out << YAML::Key << "node_types" << YAML::Value << YAML::BeginMap;
    for (const auto& nt : t.node_types) {
      out << YAML::Key << nt.name << YAML::Value << YAML::BeginMap;
      if (!nt.derived_from.empty()) out << YAML::Key << "derived_from" << YAML::Value << nt.derived_from;
      if (!nt.operations.empty()) {
        out << YAML::Key << "interfaces" << YAML::Value << YAML::BeginMap
            << YAML::Key << "Standard" << YAML::Value << YAML::BeginMap;
        for (const auto& op : nt.operations) out << YAML::Key << op << YAML::Value << YAML::Null;
        out << YAML::EndMap << YAML::EndMap;
      }
      out << YAML::EndMap;
    }
    out << YAML::EndMap;
  }

  out << YAML::Key << "topology_template" << YAML::Value << YAML::BeginMap;
  if (!t.inputs.empty()) {
    out << YAML::Key << "inputs" << YAML::Value;
    yaml::emit(out, t.inputs);
  }
  out << YAML::Key << "node_templates" << YAML::Value << YAML::BeginMap;
  for (const auto& node : t.nodes) {
    out << YAML::Key << node.name << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "type" << YAML::Value << node.type_name;
    if (!node.properties.empty()) {
      out << YAML::Key << "properties" << YAML::Value;
      yaml::emit(out, node.properties);
    }
    auto rels = t.outgoing(node.name);
    if (!rels.empty()) {
      out << YAML::Key << "requirements" << YAML::Value << YAML::BeginSeq;
      for (const auto* r : rels) {
        out << YAML::BeginMap << YAML::Key << std::string(requirement_for(r->kind))
            << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "node" << YAML::Value << r->target;
        out << YAML::Key << "relationship" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "type" << YAML::Value << std::string(type_name(r->kind));
        if (!r->location.empty()) {
          out << YAML::Key << "properties" << YAML::Value << YAML::BeginMap
              << YAML::Key << "location" << YAML::Value << r->location << YAML::EndMap;
        }
        out << YAML::EndMap << YAML::EndMap << YAML::EndMap;
      }
      out << YAML::EndSeq;
    }
    if (!node.artifacts.empty()) {
      out << YAML::Key << "artifacts" << YAML::Value << YAML::BeginMap;
      for (const auto& a : node.artifacts) {
        out << YAML::Key << a.name << YAML::Value << YAML::BeginMap
            << YAML::Key << "file" << YAML::Value << a.path
            << YAML::Key << "type" << YAML::Value << a.type << YAML::EndMap;
      }
      out << YAML::EndMap;
    }
    if (!node.interface.operations.empty()) {
      out << YAML::Key << "interfaces" << YAML::Value << YAML::BeginMap
          << YAML::Key << "Standard" << YAML::Value << YAML::BeginMap;
      for (const auto& op : node.interface.operations) {
        out << YAML::Key << op.name << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "implementation" << YAML::Value << op.implementation.path;
        if (!op.inputs.empty()) {
          out << YAML::Key << "inputs" << YAML::Value;
          yaml::emit(out, op.inputs);
        }
        out << YAML::EndMap;
      }
      out << YAML::EndMap << YAML::EndMap;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndMap << YAML::EndMap << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace toskose::tosca
