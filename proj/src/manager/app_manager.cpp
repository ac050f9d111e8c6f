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

#include "toskose/manager/app_manager.hpp"

#include <algorithm>
#include <thread>

#include "toskose/common/error.hpp"

namespace toskose::manager {
namespace {

using nlohmann::json;
using unit::ProcessState;
using Clock = std::chrono::steady_clock;

std::optional<ComponentState> state_after(std::string_view operation) {
  if (operation == "create") return ComponentState::created;
  if (operation == "configure") return ComponentState::configured;
  if (operation == "start") return ComponentState::running;
  if (operation == "stop") return ComponentState::stopped;
  if (operation == "delete") return ComponentState::not_created;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ComponentState s) noexcept {
  switch (s) {
    case ComponentState::not_created: return "NOT_CREATED";
    case ComponentState::created: return "CREATED";
    case ComponentState::configured: return "CONFIGURED";
    case ComponentState::running: return "RUNNING";
    case ComponentState::stopped: return "STOPPED";
  }
  return "NOT_CREATED";
}

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::success: return "SUCCESS";
    case Outcome::failed: return "FAILED";
    case Outcome::timeout: return "TIMEOUT";
    case Outcome::unreachable: return "UNREACHABLE";
  }
  return "FAILED";
}

json OperationResult::to_json() const {
  json j = {{"container", container},
            {"component", component},
            {"operation", operation},
            {"outcome", to_string(outcome)},
            {"program_state", final_program_state},
            {"duration", duration}};
  j["exit_status"] = exit_status ? json(*exit_status) : json(nullptr);
  if (!message.empty()) j["message"] = message;
  return j;
}

std::string program_for(std::string_view component, std::string_view operation) {
  return std::string(component) + "-" + std::string(operation);
}

AppManager::AppManager(AppModel model, ManagerOptions options)
    : model_(std::move(model)), options_(std::move(options)) {
  if (!options_.clients.has(options_.protocol)) fail(Errc::unknown_target, "no client for protocol " + options_.protocol);
}

const ComponentEntry& AppManager::require(const std::string& container, const std::string& component) const {
  const auto* c = model_.find(container, component);
  if (c == nullptr) {
    if (!model_.classification.is_hosting(container) && !model_.classification.is_standalone(container)) {
      fail(Errc::unknown_target, "unknown container " + container);
    }
    fail(Errc::unknown_target, "unknown component " + component + " in " + container);
  }
  return *c;
}

std::unique_ptr<UnitClient> AppManager::client_for(const std::string& container) const {
  const auto& endpoint = model_.endpoints.at(container);
  UnitAddress address;
  try {
    address = options_.resolver(endpoint);
  } catch (const Error& e) {
    fail(Errc::unit_unreachable, e.what());
  }
  return options_.clients.create(options_.protocol, address, options_.timeouts);
}

AppManager::Probe AppManager::probe(const std::string& container) {
  {
    std::lock_guard lock(mu_);
    const auto it = probes_.find(container);
    if (it != probes_.end() && Clock::now() - it->second.at < options_.liveness_ttl) return it->second;
  }
  Probe p;
  try {
    for (auto& info : client_for(container)->all_info()) p.programs[info.name] = std::move(info);
    p.alive = true;
  } catch (const std::exception& e) {
    p.error = e.what();
  }
  p.at = Clock::now();
  std::lock_guard lock(mu_);
  probes_[container] = p;
  return p;
}

void AppManager::forget(const std::string& container) {
  std::lock_guard lock(mu_);
  probes_.erase(container);
}

ComponentState AppManager::derive(const ComponentEntry& c, const Probe& p) {
  ComponentState stored = ComponentState::not_created;
  {
    std::lock_guard lock(mu_);
    const auto it = states_.find({c.container, c.component});
    if (it != states_.end()) stored = it->second;
  }
  if (!p.alive) return stored;
  const auto it = p.programs.find(program_for(c.component, "start"));
  if (it == p.programs.end()) return stored;
  if (it->second.state == ProcessState::running) return ComponentState::running;
  if (stored == ComponentState::running && it->second.state != ProcessState::starting) return ComponentState::stopped;
  return stored;
}

json AppManager::component_json(const ComponentEntry& c, const Probe& p) {
  json programs = json::array();
  if (p.alive) {
    for (const auto& op : c.operations) {
      const auto name = program_for(c.component, op);
      const auto it = p.programs.find(name);
      if (it == p.programs.end()) continue;
      json entry = {{"operation", op}, {"program", name}, {"state", unit::to_string(it->second.state)}};
      if (it->second.exitstatus) entry["exit_status"] = *it->second.exitstatus;
      if (it->second.pid) entry["pid"] = *it->second.pid;
      programs.push_back(std::move(entry));
    }
  }
  return {{"container", c.container},
          {"name", c.component},
          {"type", model_.templ.find(c.component)->type_name},
          {"operations", c.operations},
          {"state", to_string(derive(c, p))},
          {"programs", std::move(programs)}};
}

json AppManager::container_json(const std::string& container) {
  const auto* node = model_.templ.find(container);
  json j = {{"name", container}};
  if (const auto* image = node->image()) j["image"] = image->path;
  if (model_.classification.is_standalone(container)) {
    j["kind"] = "standalone";
    j["alias"] = container;
    j["components"] = json::array();
    return j;
  }
  const auto& endpoint = model_.endpoints.at(container);
  const auto p = probe(container);
  j["kind"] = "hosting";
  j["alias"] = endpoint.alias;
  j["unit"] = {{"alias", endpoint.alias}, {"port", endpoint.port}, {"reachable", p.alive}};
  if (!p.alive) j["unit"]["error"] = p.error;
  json components = json::array();
  for (const auto* c : model_.hosted_by(container)) components.push_back(component_json(*c, p));
  j["components"] = std::move(components);
  return j;
}

json AppManager::list_nodes() {
  json out = json::array();
  for (const auto& container : model_.containers()) out.push_back(container_json(container));
  return out;
}

json AppManager::node(const std::string& container) {
  if (!model_.classification.is_hosting(container) && !model_.classification.is_standalone(container)) {
    fail(Errc::unknown_target, "unknown container " + container);
  }
  return container_json(container);
}

json AppManager::component(const std::string& container, const std::string& component) {
  const auto& c = require(container, component);
  return component_json(c, probe(container));
}

ComponentState AppManager::state(const std::string& container, const std::string& component) {
  const auto& c = require(container, component);
  return derive(c, probe(container));
}

void AppManager::settle(UnitClient& client, const std::string& program, bool until_running, OperationResult& r) {
  const auto deadline = Clock::now() + options_.operation_timeout;
  for (;;) {
    const auto info = client.info(program);
    r.final_program_state = std::string(unit::to_string(info.state));
    r.exit_status = info.exitstatus;
    switch (info.state) {
      case ProcessState::running:
        if (until_running) {
          r.outcome = Outcome::success;
          return;
        }
        break;
      case ProcessState::exited:
        if (!until_running && options_.exitcodes.contains(info.exitstatus.value_or(-1))) {
          r.outcome = Outcome::success;
        } else {
          r.outcome = Outcome::failed;
          r.message = program + " " + info.description;
        }
        return;
      case ProcessState::fatal:
        r.outcome = Outcome::failed;
        r.message = program + " failed: " + (info.spawnerr.empty() ? info.description : info.spawnerr);
        return;
      case ProcessState::stopped:
        r.outcome = Outcome::failed;
        r.message = program + " was stopped";
        return;
      default:
        break;
    }
    if (Clock::now() >= deadline) {
      r.outcome = Outcome::timeout;
      r.message = program + " did not settle in time";
      return;
    }
    std::this_thread::sleep_for(options_.poll_interval);
  }
}

void AppManager::run(UnitClient& client, const ComponentEntry& c, OperationResult& r) {
  const auto program = program_for(c.component, r.operation);
  const bool service = r.operation == "start";
  try {
    client.start(program, false);
  } catch (const Error& e) {
    if (e.code() == Errc::spawn_failed) {
      const auto info = client.info(program);
      r.outcome = Outcome::failed;
      r.final_program_state = std::string(unit::to_string(info.state));
      r.message = e.what();
      return;
    }
    // Already started: wait for the run in progress.
    if (e.code() != Errc::already_started) throw;
  }
  settle(client, program, service, r);

  if (r.operation == "stop" && r.outcome == Outcome::success &&
      std::ranges::find(c.operations, "start") != c.operations.end()) {
    try {
      client.stop(program_for(c.component, "start"), true);
    } catch (const Error& e) {
      if (e.code() != Errc::not_running) throw;
    }
  }
}

OperationResult AppManager::execute(const std::string& container, const std::string& component,
                                    const std::string& operation) {
  const auto& c = require(container, component);
  if (std::ranges::find(c.operations, operation) == c.operations.end()) {
    fail(Errc::unknown_target, "unknown operation " + operation + " on " + component);
  }
  const std::pair key{container, component};
  {
    std::lock_guard lock(mu_);
    if (!in_flight_.insert(key).second) fail(Errc::conflict, "an operation on " + component + " is in progress");
  }
  struct Release {
    AppManager* self;
    std::pair<std::string, std::string> key;
    ~Release() {
      std::lock_guard lock(self->mu_);
      self->in_flight_.erase(key);
    }
  } release{this, key};

  OperationResult r{container, component, operation};
  const auto started = Clock::now();
  try {
    run(*client_for(container), c, r);
  } catch (const Error& e) {
    r.message = e.what();
    if (e.code() == Errc::unit_unreachable) {
      r.outcome = Outcome::unreachable;
    } else if (e.code() == Errc::operation_timeout) {
      r.outcome = Outcome::timeout;
    } else {
      r.outcome = Outcome::failed;
    }
  }
  r.duration = std::chrono::duration<double>(Clock::now() - started).count();
  forget(container);
  if (r.outcome == Outcome::success) {
    if (const auto next = state_after(operation)) {
      std::lock_guard lock(mu_);
      states_[key] = *next;
    }
  }
  return r;
}

std::string AppManager::logs(const std::string& container, const std::string& component,
                             const std::optional<std::string>& operation, long long offset, long long length) {
  const auto& c = require(container, component);
  const auto op = operation.value_or("start");
  if (std::ranges::find(c.operations, op) == c.operations.end()) {
    fail(Errc::unknown_target, "unknown operation " + op + " on " + component);
  }
  try {
    return client_for(container)->read_log(program_for(component, op), offset, length);
  } catch (const Error& e) {
    if (e.code() == Errc::no_such_program) fail(Errc::unknown_target, e.what());
    throw;
  }
}

}  // namespace toskose::manager
