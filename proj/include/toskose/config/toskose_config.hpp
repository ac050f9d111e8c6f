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
#include <optional>
#include <string>
#include <string_view>

#include "toskose/common/diagnostics.hpp"
#include "toskose/tosca/model.hpp"
#include "toskose/tosca/topology.hpp"

namespace toskose::config {

// Name of the service injected to run the manager.
inline constexpr std::string_view kManagerService = "toskose-manager";

namespace defaults {
inline constexpr int kUnitPort = 9001;
inline constexpr std::string_view kUser = "admin";
inline constexpr std::string_view kPassword = "admin";
inline constexpr std::string_view kLogLevel = "INFO";
inline constexpr std::string_view kManagerAlias = "toskose-manager";
inline constexpr int kManagerPort = 10000;
inline constexpr std::string_view kManagerMode = "production";
inline constexpr std::string_view kSecretKey = "secret";
inline constexpr std::string_view kImageTag = "latest";
inline constexpr std::string_view kImageSuffix = "-toskosed";
}  // namespace defaults

inline constexpr std::string_view kLogLevels[] = {"DEBUG", "INFO", "WARNING", "ERROR"};
inline constexpr std::string_view kModes[] = {"production", "development"};

// The `docker:` block: how the toskosed image is named and pushed.
struct ImageSettings {
  std::optional<std::string> name;
  std::optional<std::string> tag;
  // Empty in the document means "no push credentials" and is kept unset.
  std::optional<std::string> registry_password;

  friend bool operator==(const ImageSettings&, const ImageSettings&) = default;
};

struct NodeConfig {
  std::optional<std::string> alias;
  std::optional<long long> port;
  std::optional<std::string> user;
  std::optional<std::string> password;
  std::optional<std::string> log_level;
  ImageSettings docker;

  friend bool operator==(const NodeConfig&, const NodeConfig&) = default;
};

struct ManagerConfig {
  std::optional<std::string> alias;
  std::optional<long long> port;
  std::optional<std::string> user;
  std::optional<std::string> password;
  std::optional<std::string> mode;
  std::optional<std::string> secret_key;
  ImageSettings docker;

  friend bool operator==(const ManagerConfig&, const ManagerConfig&) = default;
};

// Possibly partial; complete_config() fills every unset field.
struct ToskoseConfig {
  std::map<std::string, NodeConfig> nodes;
  std::optional<ManagerConfig> manager;

  friend bool operator==(const ToskoseConfig&, const ToskoseConfig&) = default;
};

// Throws Error with syntax_error, unknown_key or type_mismatch. An empty
// document yields an empty config.
ToskoseConfig parse_config(const std::string& document);

// Emits the two-object layout (nodes, manager) with nested docker blocks.
std::string serialize_config(const ToskoseConfig& c);

enum class ConfigStage {
  input,      // as provided by the user
  completed,  // after complete_config(); every field must be set
};

ValidationReport validate_config(const ToskoseConfig& c, const tosca::ServiceTemplate& t,
                                 ConfigStage stage = ConfigStage::input);

struct CompletionOptions {
  // Repository owner prefix for generated image names ("giulen" gives
  // "giulen/<app>-<container>-toskosed"); empty for no prefix.
  std::string image_repository;
};

// Default image name for a container (or "manager") of application `app`.
std::string default_image_name(std::string_view app, std::string_view container,
                               std::string_view repository);

// Fill unset fields with defaults. Never overwrites provided values;
// idempotent. Precondition: t validated.
ToskoseConfig complete_config(const ToskoseConfig& partial, const tosca::ServiceTemplate& t,
                              const CompletionOptions& options = {});

// Convenience accessors for completed configs.
const NodeConfig& node_config(const ToskoseConfig& c, const std::string& container);
const ManagerConfig& manager_config(const ToskoseConfig& c);

}  // namespace toskose::config
