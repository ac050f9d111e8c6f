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

#include "toskose/packager/compose.hpp"

#include <yaml-cpp/yaml.h>

#include "toskose/common/error.hpp"

namespace toskose::packager {
namespace {

std::vector<std::string> string_list(const YAML::Node& n, const std::string& what) {
  std::vector<std::string> out;
  if (!n || n.IsNull()) return out;
  if (!n.IsSequence()) fail(Errc::syntax_error, what + " must be a list");
  for (const auto& item : n) {
    if (!item.IsScalar()) fail(Errc::syntax_error, what + " entries must be scalars");
    out.push_back(item.Scalar());
  }
  return out;
}

EnvList environment_of(const YAML::Node& n) {
  EnvList out;
  if (!n || n.IsNull()) return out;
  if (n.IsMap()) {
    for (const auto& kv : n) out.emplace_back(kv.first.Scalar(), kv.second.IsNull() ? "" : kv.second.Scalar());
    return out;
  }
  for (const auto& entry : string_list(n, "environment")) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) {
      out.emplace_back(entry, "");
    } else {
      out.emplace_back(entry.substr(0, eq), entry.substr(eq + 1));
    }
  }
  return out;
}

}  // namespace

const ServiceSpec* ComposeModel::find(std::string_view name) const noexcept {
  for (const auto& s : services) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

ComposeModel generate_compose(const EnrichedModel& m) {
  ComposeModel c;
  for (const auto& plan : m.containers) {
    ServiceSpec s;
    s.name = plan.name;
    s.image = plan.image.target_image;
    s.init = plan.image.toskosed;
    s.command = plan.command;
    s.aliases = {plan.alias};
    s.volumes = plan.volumes;
    s.environment = plan.environment;
    s.ports = plan.ports;
    c.services.push_back(std::move(s));
  }
  c.volumes = m.volumes;
  return c;
}

std::string serialize_compose(const ComposeModel& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "version" << YAML::Value << YAML::SingleQuoted << c.version;
  out << YAML::Key << "services" << YAML::Value << YAML::BeginMap;
  for (const auto& s : c.services) {
    out << YAML::Key << s.name << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "image" << YAML::Value << s.image;
    if (s.init) out << YAML::Key << "init" << YAML::Value << true;
    if (!s.command.empty()) out << YAML::Key << "command" << YAML::Value << s.command;
    out << YAML::Key << "networks" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << c.network.name << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "aliases" << YAML::Value << s.aliases;
    out << YAML::EndMap << YAML::EndMap;
    if (!s.volumes.empty()) out << YAML::Key << "volumes" << YAML::Value << s.volumes;
    if (!s.environment.empty()) {
      out << YAML::Key << "environment" << YAML::Value << YAML::BeginSeq;
      for (const auto& [k, v] : s.environment) out << k + "=" + v;
      out << YAML::EndSeq;
    }
    if (!s.ports.empty()) {
      out << YAML::Key << "ports" << YAML::Value << YAML::BeginSeq;
      for (const auto& p : s.ports) out << YAML::DoubleQuoted << p;
      out << YAML::EndSeq;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  out << YAML::Key << "networks" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << c.network.name << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "driver" << YAML::Value << c.network.driver;
  out << YAML::Key << "attachable" << YAML::Value << c.network.attachable;
  out << YAML::EndMap << YAML::EndMap;
  if (!c.volumes.empty()) {
    out << YAML::Key << "volumes" << YAML::Value << YAML::BeginMap;
    for (const auto& v : c.volumes) out << YAML::Key << v << YAML::Value << YAML::Null;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  std::string text = "---\n";
  text += out.c_str();
  text += "\n";
  return text;
}

ComposeModel parse_compose(const std::string& document) {
  YAML::Node root;
  try {
    root = YAML::Load(document);
  } catch (const YAML::Exception& e) {
    fail(Errc::syntax_error, std::string("compose document: ") + e.what());
  }
  if (!root.IsMap()) fail(Errc::syntax_error, "compose document must be a mapping");
  try {
    ComposeModel c;
    if (root["version"]) c.version = root["version"].Scalar();
    if (const auto nets = root["networks"]; nets && nets.IsMap() && nets.size() > 0) {
      const auto first = nets.begin();
      c.network.name = first->first.Scalar();
      const auto& spec = first->second;
      c.network.driver = spec["driver"] ? spec["driver"].Scalar() : "bridge";
      c.network.attachable = spec["attachable"] && spec["attachable"].as<bool>();
    }
    if (const auto services = root["services"]; services && services.IsMap()) {
      for (const auto& kv : services) {
        ServiceSpec s;
        s.name = kv.first.Scalar();
        const auto& n = kv.second;
        if (!n.IsMap()) fail(Errc::syntax_error, "service " + s.name + " must be a mapping");
        if (n["image"]) s.image = n["image"].Scalar();
        s.init = n["init"] && n["init"].as<bool>();
        if (n["command"]) s.command = n["command"].Scalar();
        if (const auto nets = n["networks"]; nets && nets.IsMap()) {
          for (const auto& net : nets) {
            if (net.second.IsMap()) {
              for (auto& a : string_list(net.second["aliases"], "aliases")) s.aliases.push_back(a);
            }
          }
        }
        s.volumes = string_list(n["volumes"], "volumes");
        s.environment = environment_of(n["environment"]);
        s.ports = string_list(n["ports"], "ports");
        c.services.push_back(std::move(s));
      }
    }
    if (const auto vols = root["volumes"]; vols && vols.IsMap()) {
      for (const auto& kv : vols) c.volumes.push_back(kv.first.Scalar());
    }
    return c;
  } catch (const YAML::Exception& e) {
    fail(Errc::syntax_error, std::string("compose document: ") + e.what());
  }
}

}  // namespace toskose::packager
