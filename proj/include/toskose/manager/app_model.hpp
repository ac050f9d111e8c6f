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
#include <string>
#include <string_view>
#include <vector>

#include "toskose/config/toskose_config.hpp"
#include "toskose/tosca/model.hpp"
#include "toskose/tosca/topology.hpp"

namespace toskose::manager {

// Where a hosting container's unit listens, by network alias.
struct UnitEndpoint {
  std::string alias;
  int port = 0;
  std::string user;
  std::string password;

  friend bool operator==(const UnitEndpoint&, const UnitEndpoint&) = default;
};

struct ComponentEntry {
  std::string container;
  std::string component;
  std::vector<std::string> operations;  // interface declaration order

  friend bool operator==(const ComponentEntry&, const ComponentEntry&) = default;
};

struct AppModel {
  tosca::ServiceTemplate templ;
  config::ToskoseConfig config;  // completed
  tosca::NodeClassification classification;
  std::map<std::string, UnitEndpoint> endpoints;  // hosting containers only
  std::vector<ComponentEntry> components;         // container order, then host order

  // Hosting and standalone containers in template order.
  std::vector<std::string> containers() const;
  const ComponentEntry* find(std::string_view container, std::string_view component) const;
  std::vector<const ComponentEntry*> hosted_by(std::string_view container) const;
};

// Throws Error(validation_failed) carrying the first diagnostics when either
// document does not validate, and the parse errors of either document.
AppModel load_app_model(const std::string& template_doc, const std::string& config_doc);

}  // namespace toskose::manager
