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

#include "toskose/config/toskose_config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <regex>
#include <set>

#include "toskose/common/error.hpp"
#include "toskose/common/yaml.hpp"

namespace toskose::config {
namespace {

using tosca::NodeKind;

std::string scalar_of(const YAML::Node& n, const std::string& where) {
  if (n.IsNull()) return {};
  if (!n.IsScalar()) fail(Errc::type_mismatch, where + " must be a scalar");
  return n.Scalar();
}

std::optional<std::string> text_field(const YAML::Node& n, const std::string& where) {
  if (n.IsNull()) return std::nullopt;
  return scalar_of(n, where);
}

long long port_field(const YAML::Node& n, const std::string& where) {
  auto text = scalar_of(n, where);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    fail(Errc::type_mismatch, where + " must be an integer, got '" + text + "'");
  }
  return value;
}

void require_map(const YAML::Node& n, const std::string& where) {
  if (!n.IsMap()) fail(Errc::type_mismatch, where + " must be a mapping");
}

[[noreturn]] void unknown(const std::string& key, const std::string& where) {
  fail(Errc::unknown_key, "unknown key '" + key + "' in " + where);
}

ImageSettings parse_docker(const YAML::Node& n, const std::string& where) {
  ImageSettings out;
  if (n.IsNull()) return out;
  require_map(n, where);
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    const auto path = where + "." + key;
    if (key == "name") {
      out.name = text_field(kv.second, path);
    } else if (key == "tag") {
      out.tag = text_field(kv.second, path);
    } else if (key == "registry_password") {
      auto v = text_field(kv.second, path);
      if (v && !v->empty()) out.registry_password = v;
    } else {
      unknown(key, where);
    }
  }
  return out;
}

NodeConfig parse_node(const YAML::Node& n, const std::string& where) {
  NodeConfig out;
  if (n.IsNull()) return out;
  require_map(n, where);
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    const auto path = where + "." + key;
    if (key == "alias") out.alias = text_field(kv.second, path);
    else if (key == "port") out.port = port_field(kv.second, path);
    else if (key == "user") out.user = text_field(kv.second, path);
    else if (key == "password") out.password = text_field(kv.second, path);
    else if (key == "log_level") out.log_level = text_field(kv.second, path);
    else if (key == "docker") out.docker = parse_docker(kv.second, path);
    else unknown(key, where);
  }
  return out;
}

ManagerConfig parse_manager(const YAML::Node& n) {
  ManagerConfig out;
  if (n.IsNull()) return out;
  require_map(n, "manager");
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    const auto path = "manager." + key;
    if (key == "alias") out.alias = text_field(kv.second, path);
    else if (key == "port") out.port = port_field(kv.second, path);
    else if (key == "user") out.user = text_field(kv.second, path);
    else if (key == "password") out.password = text_field(kv.second, path);
    else if (key == "mode") out.mode = text_field(kv.second, path);
    else if (key == "secret_key") out.secret_key = text_field(kv.second, path);
    else if (key == "docker") out.docker = parse_docker(kv.second, path);
    else unknown(key, "manager");
  }
  return out;
}

void emit_docker(YAML::Emitter& out, const ImageSettings& d) {
  out << YAML::Key << "docker" << YAML::Value << YAML::BeginMap;
  if (d.name) out << YAML::Key << "name" << YAML::Value << *d.name;
  if (d.tag) out << YAML::Key << "tag" << YAML::Value << *d.tag;
  out << YAML::Key << "registry_password" << YAML::Value;
  if (d.registry_password) {
    out << *d.registry_password;
  } else {
    out << YAML::Null;
  }
  out << YAML::EndMap;
}

template <typename T>
void emit_opt(YAML::Emitter& out, const char* key, const std::optional<T>& v) {
  if (v) out << YAML::Key << key << YAML::Value << *v;
}

bool dns_label(std::string_view s) {
  if (s.empty() || s.size() > 63) return false;
  if (s.front() == '-' || s.back() == '-') return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-';
  });
}

template <std::size_t N>
bool one_of(const std::string& v, const std::string_view (&set)[N]) {
  return std::find(std::begin(set), std::end(set), v) != std::end(set);
}

struct FieldChecks {
  ValidationReport& report;
  const std::string& node;

  void port(const std::optional<long long>& p) {
    if (p && (*p < 1 || *p > 65535)) {
      report.add("port-range", node, "port " + std::to_string(*p) + " is outside [1, 65535]");
    }
  }
  void alias(const std::optional<std::string>& a) {
    if (a && !dns_label(*a)) {
      report.add("alias-invalid", node, "alias '" + *a + "' is not a DNS label");
    }
  }
  void credentials(const std::optional<std::string>& user,
                   const std::optional<std::string>& password) {
    if ((user && user->empty()) || (password && password->empty())) {
      report.add("credentials-empty", node, "user and password must not be empty");
    }
  }
  void image(const ImageSettings& d) {
    if (d.name && d.name->empty()) report.add("image-name", node, "image name must not be empty");
    if (d.tag && d.tag->empty()) report.add("image-tag", node, "image tag must not be empty");
  }
};

}  // namespace

ToskoseConfig parse_config(const std::string& document) {
  const YAML::Node root = yaml::load(document, "toskose config");
  ToskoseConfig out;
  if (!root || root.IsNull()) return out;
  require_map(root, "toskose config");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (key == "nodes") {
      if (kv.second.IsNull()) continue;
      require_map(kv.second, "nodes");
      for (const auto& node : kv.second) {
        const auto name = node.first.as<std::string>();
        out.nodes[name] = parse_node(node.second, "nodes." + name);
      }
    } else if (key == "manager") {
      out.manager = parse_manager(kv.second);
    } else {
      unknown(key, "toskose config");
    }
  }
  return out;
}

std::string serialize_config(const ToskoseConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "nodes" << YAML::Value << YAML::BeginMap;
  for (const auto& [name, n] : c.nodes) {
    out << YAML::Key << name << YAML::Value << YAML::BeginMap;
    emit_opt(out, "alias", n.alias);
    emit_opt(out, "port", n.port);
    emit_opt(out, "user", n.user);
    emit_opt(out, "password", n.password);
    emit_opt(out, "log_level", n.log_level);
    emit_docker(out, n.docker);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  if (c.manager) {
    const auto& m = *c.manager;
    out << YAML::Key << "manager" << YAML::Value << YAML::BeginMap;
    emit_opt(out, "alias", m.alias);
    emit_opt(out, "port", m.port);
    emit_opt(out, "user", m.user);
    emit_opt(out, "password", m.password);
    emit_opt(out, "mode", m.mode);
    emit_opt(out, "secret_key", m.secret_key);
    emit_docker(out, m.docker);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  // Unset values are written as a bare key, the way the reference files do.
  std::string text = std::regex_replace(std::string(out.c_str()), std::regex(": ~\n"), ":\n");
  if (text.ends_with(": ~")) text.resize(text.size() - 2);
  return text + "\n";
}

ValidationReport validate_config(const ToskoseConfig& c, const tosca::ServiceTemplate& t,
                                 ConfigStage stage) {
  ValidationReport report;
  const auto classes = tosca::classify_nodes(t);

  if (t.find(kManagerService) != nullptr) {
    report.add("reserved-name", std::string(kManagerService),
               "node name '" + std::string(kManagerService) + "' is reserved for the manager");
  }

  std::map<std::string, std::vector<std::string>> aliases;
  bool any_password = false;

  for (const auto& [name, n] : c.nodes) {
    const auto* node = t.find(name);
    if (node == nullptr || node->kind != NodeKind::container) {
      report.add("config-for-unknown", name, "no container named '" + name + "' in the template");
      continue;
    }
    if (classes.is_standalone(name)) {
      report.add("config-for-standalone", name,
                 "container '" + name + "' hosts no software component and takes no unit configuration");
      continue;
    }
    FieldChecks check{report, name};
    check.port(n.port);
    check.alias(n.alias);
    check.credentials(n.user, n.password);
    check.image(n.docker);
    if (n.log_level && !one_of(*n.log_level, kLogLevels)) {
      report.add("log-level", name, "log level '" + *n.log_level + "' is not one of DEBUG, INFO, WARNING, ERROR");
    }
    aliases[n.alias.value_or(name)].push_back(name);
    any_password = any_password || n.password.has_value();
  }

  const std::string manager_node(kManagerService);
  if (!c.manager) aliases[std::string(defaults::kManagerAlias)].push_back(manager_node);
  if (c.manager) {
    const auto& m = *c.manager;
    FieldChecks check{report, manager_node};
    check.port(m.port);
    check.alias(m.alias);
    check.credentials(m.user, m.password);
    check.image(m.docker);
    if (m.mode && !one_of(*m.mode, kModes)) {
      report.add("manager-mode", manager_node, "mode '" + *m.mode + "' is not production or development");
    }
    aliases[m.alias.value_or(std::string(defaults::kManagerAlias))].push_back(manager_node);
    any_password = any_password || m.password.has_value();
  }

  for (const auto& [alias, owners] : aliases) {
    if (owners.size() > 1) {
      report.add("alias-clash", owners.front(), "alias '" + alias + "' is used by more than one container");
    }
  }

  if (stage == ConfigStage::completed) {
    const auto is_set = [](const auto&... v) { return (v.has_value() && ...); };
    for (const auto& [container, _] : classes.hosting) {
      auto it = c.nodes.find(container);
      if (it == c.nodes.end() ||
          !is_set(it->second.alias, it->second.port, it->second.user, it->second.password,
                  it->second.log_level, it->second.docker.name, it->second.docker.tag)) {
        report.add("node-config-missing", container, "hosting container '" + container + "' is not fully configured");
      }
    }
    if (!c.manager || !is_set(c.manager->alias, c.manager->port, c.manager->user,
                              c.manager->password, c.manager->mode, c.manager->secret_key,
                              c.manager->docker.name, c.manager->docker.tag)) {
      report.add("manager-missing", manager_node, "manager block is missing or incomplete");
    }
  }

  const bool production = !c.manager || c.manager->mode.value_or(std::string(defaults::kManagerMode)) == "production";
  if (production && any_password) {
    report.add("cleartext-password", "", "passwords are stored in clear text in the configuration",
               Severity::warning);
  }
  return report;
}

std::string default_image_name(std::string_view app, std::string_view container,
                               std::string_view repository) {
  std::string name;
  if (!repository.empty()) {
    name += repository;
    name += '/';
  }
  name += app;
  name += '-';
  name += container;
  name += defaults::kImageSuffix;
  return name;
}

ToskoseConfig complete_config(const ToskoseConfig& partial, const tosca::ServiceTemplate& t,
                              const CompletionOptions& options) {
  ToskoseConfig out = partial;
  const auto classes = tosca::classify_nodes(t);
  auto fill = [](auto& field, auto value) {
    if (!field) field = value;
  };

  for (const auto& [container, _] : classes.hosting) {
    auto& n = out.nodes[container];
    fill(n.alias, container);
    fill(n.port, static_cast<long long>(defaults::kUnitPort));
    fill(n.user, std::string(defaults::kUser));
    fill(n.password, std::string(defaults::kPassword));
    fill(n.log_level, std::string(defaults::kLogLevel));
    fill(n.docker.name, default_image_name(t.name, container, options.image_repository));
    fill(n.docker.tag, std::string(defaults::kImageTag));
  }

  auto& m = out.manager ? *out.manager : out.manager.emplace();
  fill(m.alias, std::string(defaults::kManagerAlias));
  fill(m.port, static_cast<long long>(defaults::kManagerPort));
  fill(m.user, std::string(defaults::kUser));
  fill(m.password, std::string(defaults::kPassword));
  fill(m.mode, std::string(defaults::kManagerMode));
  fill(m.secret_key, std::string(defaults::kSecretKey));
  fill(m.docker.name, default_image_name(t.name, "manager", options.image_repository));
  fill(m.docker.tag, std::string(defaults::kImageTag));
  return out;
}

const NodeConfig& node_config(const ToskoseConfig& c, const std::string& container) {
  auto it = c.nodes.find(container);
  if (it == c.nodes.end()) fail(Errc::unknown_target, "no configuration for container " + container);
  return it->second;
}

const ManagerConfig& manager_config(const ToskoseConfig& c) {
  if (!c.manager) fail(Errc::unknown_target, "configuration has no manager block");
  return *c.manager;
}

}  // namespace toskose::config
