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

#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "toskose/manager/app_model.hpp"
#include "toskose/manager/unit_client.hpp"

namespace toskose::manager {

enum class ComponentState { not_created, created, configured, running, stopped };
std::string_view to_string(ComponentState s) noexcept;

enum class Outcome { success, failed, timeout, unreachable };
std::string_view to_string(Outcome o) noexcept;

struct OperationResult {
  std::string container;
  std::string component;
  std::string operation;
  Outcome outcome = Outcome::failed;
  std::optional<int> exit_status;  // iff the program reached EXITED
  std::string final_program_state;
  double duration = 0;
  std::string message;

  nlohmann::json to_json() const;
};

// Program name a (component, operation) pair runs as on its unit.
std::string program_for(std::string_view component, std::string_view operation);

struct ManagerOptions {
  std::string protocol = "xmlrpc";
  ClientFactory clients = ClientFactory::with_defaults();
  AliasResolver resolver = resolve_by_dns;
  ClientTimeouts timeouts{};
  std::chrono::milliseconds operation_timeout{120000};
  std::chrono::milliseconds poll_interval{100};
  std::chrono::milliseconds liveness_ttl{2000};
  // Exit codes the generated unit configs declare as expected.
  std::set<int> exitcodes{0};
};

// Forwards lifecycle requests to units. The model is read-only; the only
// mutable state is the advisory derived state per component, the liveness
// cache and the set of in-flight operations.
class AppManager {
 public:
  explicit AppManager(AppModel model, ManagerOptions options = {});

  const AppModel& model() const noexcept { return model_; }

  nlohmann::json list_nodes();
  // Throws Error(unknown_target).
  nlohmann::json node(const std::string& container);
  nlohmann::json component(const std::string& container, const std::string& component);

  // Settles the operation. Throws Error(unknown_target) for a target outside
  // the model and Error(conflict) while another operation on the same
  // component is in flight; every other failure is reported in the result.
  OperationResult execute(const std::string& container, const std::string& component,
                          const std::string& operation);

  // Reads the stdout log of `<component>-<operation>` (default `start`).
  // Throws Error with unknown_target, unit_unreachable or operation_timeout.
  std::string logs(const std::string& container, const std::string& component,
                   const std::optional<std::string>& operation, long long offset, long long length);

  ComponentState state(const std::string& container, const std::string& component);

 private:
  struct Probe {
    std::chrono::steady_clock::time_point at;
    bool alive = false;
    std::string error;
    std::map<std::string, unit::ProcessInfo> programs;
  };

  const ComponentEntry& require(const std::string& container, const std::string& component) const;
  std::unique_ptr<UnitClient> client_for(const std::string& container) const;
  Probe probe(const std::string& container);
  void forget(const std::string& container);
  ComponentState derive(const ComponentEntry& c, const Probe& p);
  nlohmann::json component_json(const ComponentEntry& c, const Probe& p);
  nlohmann::json container_json(const std::string& container);
  void run(UnitClient& client, const ComponentEntry& c, OperationResult& r);
  void settle(UnitClient& client, const std::string& program, bool until_running, OperationResult& r);

  AppModel model_;
  ManagerOptions options_;
  std::mutex mu_;
  std::map<std::pair<std::string, std::string>, ComponentState> states_;
  std::set<std::pair<std::string, std::string>> in_flight_;
  std::map<std::string, Probe> probes_;
};

}  // namespace toskose::manager
