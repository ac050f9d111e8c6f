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

#include <json.hpp>
#include <yaml-cpp/yaml.h>

namespace toskose::yaml {

// Structural copy of a YAML node. Scalars become strings (their literal
// text), null stays null, maps keep document order.
nlohmann::ordered_json to_value(const YAML::Node& node);

// Emit a value produced by to_value() (or built by hand) into an emitter.
void emit(YAML::Emitter& out, const nlohmann::ordered_json& value);

// Parse text, rethrowing yaml-cpp failures as Error(syntax_error).
YAML::Node load(const std::string& text, const std::string& what);

}  // namespace toskose::yaml
