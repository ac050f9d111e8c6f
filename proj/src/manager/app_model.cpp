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

#include "toskose/manager/app_model.hpp"

#include "toskose/common/error.hpp"
#include "toskose/tosca/parser.hpp"

namespace toskose::manager {
namespace {

void require_clean(const ValidationReport& report, std::string_view what) {
  if (report.clean()) return;
  std::string message(what);
  for (const auto& d : report.items()) {
    if (d.severity != Severity::error) continue;
    message += "; " + d.code + (d.node.empty() ? "" : " (" + d.node + ")") + ": " + d.message;
  }
  fail(Errc::validation_failed, message);
}

}  // namespace

std::vector<std::string> AppModel::containers() const {
  std::vector<std::string> out;
  for (const auto& n : templ.nodes) {
    if (classification.is_hosting(n.name) || classification.is_standalone(n.name)) out.push_back(n.name);
  }
  return out;
}

const ComponentEntry* AppModel::find(std::string_view container, std::string_view component) const {
  for (const auto& c : components) {
    if (c.container == container && c.component == component) return &c;
  }
  return nullptr;
}

std::vector<const ComponentEntry*> AppModel::hosted_by(std::string_view container) const {
  std::vector<const ComponentEntry*> out;
  for (const auto& c : components) {
    if (c.container == container) out.push_back(&c);
  }
  return out;
}

AppModel load_app_model(const std::string& template_doc, const std::string& config_doc) {
  AppModel m;
  m.templ = tosca::parse_service_template(template_doc);
  require_clean(tosca::validate_topology(m.templ), "invalid template");

  const auto given = config::parse_config(config_doc);
  require_clean(config::validate_config(given, m.templ), "invalid configuration");
  m.config = config::complete_config(given, m.templ);
  require_clean(config::validate_config(m.config, m.templ, config::ConfigStage::completed),
                "incomplete configuration");

  m.classification = tosca::classify_nodes(m.templ);
  for (const auto& container : m.containers()) {
    const auto it = m.classification.hosting.find(container);
    if (it == m.classification.hosting.end()) continue;
    const auto& node = config::node_config(m.config, container);
    m.endpoints[container] = {*node.alias, static_cast<int>(*node.port), *node.user, *node.password};
    for (const auto& software : it->second) {
      m.components.push_back({container, software, m.templ.find(software)->interface.names()});
    }
  }
  return m;
}

}  // namespace toskose::manager
