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
#include <vector>

#include "toskose/packager/model.hpp"

namespace toskose::packager {

struct ServiceSpec {
  std::string name;
  std::string image;
  bool init = false;
  std::string command;
  std::vector<std::string> aliases;
  std::vector<std::string> volumes;
  EnvList environment;
  std::vector<std::string> ports;
  friend bool operator==(const ServiceSpec&, const ServiceSpec&) = default;
};

struct NetworkSpec {
  std::string name{kNetwork};
  std::string driver = "overlay";
  bool attachable = true;
  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

struct ComposeModel {
  std::string version = "3.7";
  std::vector<ServiceSpec> services;  // template order, manager last
  NetworkSpec network;
  std::vector<std::string> volumes;

  const ServiceSpec* find(std::string_view name) const noexcept;
  friend bool operator==(const ComposeModel&, const ComposeModel&) = default;
};

ComposeModel generate_compose(const EnrichedModel& m);

// Deterministic block-style YAML with keys in a fixed order.
std::string serialize_compose(const ComposeModel& c);

// Reads documents in the shape serialize_compose() writes, plus the common
// variants (environment as a mapping, flow style). Throws Error(syntax_error).
ComposeModel parse_compose(const std::string& document);

}  // namespace toskose::packager
