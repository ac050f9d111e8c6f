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

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "toskose/config/toskose_config.hpp"
#include "toskose/tosca/model.hpp"
#include "toskose/tosca/topology.hpp"

namespace toskose::packager {

// Images the toskosed containers are built from.
inline constexpr std::string_view kUnitImage = "diunipisocc/toskose-unit:latest";
inline constexpr std::string_view kManagerImage = "diunipisocc/toskose-manager:latest";

// Where artifacts land inside a toskosed container.
inline constexpr std::string_view kAppsRoot = "/toskose/apps";
inline constexpr std::string_view kUnitBinary = "/toskose/bin/toskose-unit";
inline constexpr std::string_view kSupervisorConfig = "supervisord.conf";
inline constexpr std::string_view kManagerConfigDir = "/toskose/manager";
inline constexpr std::string_view kNetwork = "toskose-network";

using EnvList = std::vector<std::pair<std::string, std::string>>;

enum class ContainerRole { hosting, standalone, manager };

struct ImagePlan {
  std::string base_image;
  std::string target_image;  // equals base_image when not toskosed
  bool toskosed = false;
  std::string registry_password;
};

struct ContainerPlan {
  std::string name;
  ContainerRole role = ContainerRole::standalone;
  std::string alias;
  std::vector<std::string> components;  // hosted software, classification order
  EnvList environment;
  ImagePlan image;
  std::vector<std::string> ports;    // "host:container/tcp"
  std::vector<std::string> volumes;  // "volume:/path" and bind mounts
  std::string command;  // standalone override, if declared
};

struct EnrichedModel {
  tosca::ServiceTemplate templ;
  config::ToskoseConfig config;  // completed
  tosca::NodeClassification classification;
  std::vector<ContainerPlan> containers;  // template order, manager last
  std::vector<std::string> volumes;       // attached VOLUME nodes, template order

  const ContainerPlan* find(std::string_view name) const noexcept;
  const ContainerPlan& manager() const;
};

// "INPUT_" + name uppercased, non-alphanumerics mapped to '_'.
std::string input_env_name(std::string_view input);
std::string program_name(std::string_view component, std::string_view operation);
// Scalars verbatim, anything else as JSON.
std::string input_value_text(const tosca::Value& v);

// Preconditions: template and config validated, config completed.
EnrichedModel enrich_model(const tosca::ServiceTemplate& t, const config::ToskoseConfig& completed);

}  // namespace toskose::packager
