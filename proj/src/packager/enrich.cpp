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

#include <algorithm>
#include <cctype>

#include "toskose/common/error.hpp"
#include "toskose/packager/model.hpp"

namespace toskose::packager {
namespace {

using tosca::NodeKind;
using tosca::RelKind;

std::string image_ref(const config::ImageSettings& d) {
  return d.name.value_or("") + ":" + d.tag.value_or(std::string(config::defaults::kImageTag));
}

void add_env(EnvList& env, std::string name, std::string value) {
  const bool seen = std::any_of(env.begin(), env.end(), [&](const auto& kv) { return kv.first == name; });
  if (!seen) env.emplace_back(std::move(name), std::move(value));
}

std::vector<std::string> port_mappings(const tosca::NodeTemplate& n) {
  std::vector<std::string> out;
  if (!n.properties.contains("ports")) return out;
  for (const auto& [container_port, host_port] : n.properties["ports"].items()) {
    out.push_back(input_value_text(host_port) + ":" + container_port + "/tcp");
  }
  return out;
}

std::vector<std::string> bind_mounts(const tosca::NodeTemplate& n) {
  std::vector<std::string> out;
  if (!n.properties.contains("share_data")) return out;
  auto add = [&](const tosca::Value& v) {
    if (v.is_object()) {
      for (const auto& [host, inside] : v.items()) out.push_back(host + ":" + input_value_text(inside));
    } else {
      out.push_back(input_value_text(v));
    }
  };
  const auto& share = n.properties["share_data"];
  if (share.is_array()) {
    for (const auto& item : share) add(item);
  } else {
    add(share);
  }
  return out;
}

std::string command_of(const tosca::NodeTemplate& n) {
  if (!n.properties.contains("command")) return {};
  const auto& c = n.properties["command"];
  if (!c.is_array()) return input_value_text(c);
  std::string out;
  for (const auto& word : c) out += (out.empty() ? "" : " ") + input_value_text(word);
  return out;
}

}  // namespace

std::string input_env_name(std::string_view input) {
  std::string out = "INPUT_";
  for (char c : input) {
    const auto u = static_cast<unsigned char>(c);
    out += std::isalnum(u) ? static_cast<char>(std::toupper(u)) : '_';
  }
  return out;
}

std::string program_name(std::string_view component, std::string_view operation) {
  return std::string(component) + "-" + std::string(operation);
}

std::string input_value_text(const tosca::Value& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return {};
  return v.dump();
}

const ContainerPlan* EnrichedModel::find(std::string_view name) const noexcept {
  for (const auto& c : containers) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const ContainerPlan& EnrichedModel::manager() const {
  for (const auto& c : containers) {
    if (c.role == ContainerRole::manager) return c;
  }
  fail(Errc::validation_failed, "model has no manager container");
}

EnrichedModel enrich_model(const tosca::ServiceTemplate& t, const config::ToskoseConfig& completed) {
  EnrichedModel m;
  m.templ = t;
  m.config = completed;
  m.classification = tosca::classify_nodes(t);

  for (const auto& node : t.nodes) {
    if (node.kind == NodeKind::volume) {
      for (const auto& r : t.relationships) {
        if (r.kind == RelKind::attaches_to && r.target == node.name) {
          m.volumes.push_back(node.name);
          break;
        }
      }
    }
    if (node.kind != NodeKind::container) continue;

    ContainerPlan c;
    c.name = node.name;
    c.alias = node.name;
    c.ports = port_mappings(node);
    const auto* image = node.image();
    c.image.base_image = image != nullptr ? image->path : std::string();
    c.image.target_image = c.image.base_image;

    if (m.classification.is_hosting(node.name)) {
      const auto& nc = config::node_config(completed, node.name);
      c.role = ContainerRole::hosting;
      c.alias = nc.alias.value_or(node.name);
      c.components = m.classification.hosting.at(node.name);
      c.image.toskosed = true;
      c.image.target_image = image_ref(nc.docker);
      c.image.registry_password = nc.docker.registry_password.value_or("");
      add_env(c.environment, "SUPERVISORD_ALIAS", c.alias);
      add_env(c.environment, "SUPERVISORD_PORT", std::to_string(nc.port.value_or(config::defaults::kUnitPort)));
      add_env(c.environment, "SUPERVISORD_USER", nc.user.value_or(""));
      add_env(c.environment, "SUPERVISORD_PASSWORD", nc.password.value_or(""));
      add_env(c.environment, "SUPERVISORD_LOG_LEVEL", nc.log_level.value_or(""));
      for (const auto& comp : c.components) {
        for (const auto& op : t.find(comp)->interface.operations) {
          for (const auto& [name, value] : op.inputs.items()) {
            add_env(c.environment, input_env_name(name), input_value_text(value));
          }
        }
      }
    } else {
      c.role = ContainerRole::standalone;
      c.command = command_of(node);
    }
    if (node.properties.contains("env_variables")) {
      for (const auto& [name, value] : node.properties["env_variables"].items()) {
        add_env(c.environment, name, input_value_text(value));
      }
    }
    for (const auto* r : t.outgoing(node.name, RelKind::attaches_to)) {
      c.volumes.push_back(r->target + ":" + r->location);
    }
    for (auto& mount : bind_mounts(node)) c.volumes.push_back(std::move(mount));
    m.containers.push_back(std::move(c));
  }

  const auto& mc = config::manager_config(completed);
  ContainerPlan manager;
  manager.name = std::string(config::kManagerService);
  manager.role = ContainerRole::manager;
  manager.alias = mc.alias.value_or(std::string(config::defaults::kManagerAlias));
  manager.image.base_image = std::string(kManagerImage);
  manager.image.target_image = image_ref(mc.docker);
  manager.image.toskosed = true;
  manager.image.registry_password = mc.docker.registry_password.value_or("");
  const auto port = std::to_string(mc.port.value_or(config::defaults::kManagerPort));
  add_env(manager.environment, "TOSKOSE_MANAGER_PORT", port);
  add_env(manager.environment, "TOSKOSE_APP_MODE", mc.mode.value_or(""));
  add_env(manager.environment, "SECRET_KEY", mc.secret_key.value_or(""));
  manager.ports.push_back(port + ":" + port + "/tcp");
  m.containers.push_back(std::move(manager));
  return m;
}

}  // namespace toskose::packager
