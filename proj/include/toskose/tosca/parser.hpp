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

#include "toskose/tosca/model.hpp"

namespace toskose::tosca {

// Parse a TosKer-style TOSCA service template.
//
// Node kinds are resolved through declared node_types to the TosKer base
// types. Requirements become relationships: host -> HostedOn,
// connection -> ConnectsTo, dependency -> DependsOn, storage -> AttachesTo,
// unless an explicit relationship type is given. `get_input` references in
// operation inputs are resolved against topology inputs.
//
// Throws Error with syntax_error, unknown_node_type, unresolved_target or
// invalid_relationship.
ServiceTemplate parse_service_template(const std::string& document,
                                       std::string_view fallback_name = "app");

// Canonical YAML form; parse_service_template(serialize(t)) == t for any
// parsed template.
std::string serialize_service_template(const ServiceTemplate& t);

}  // namespace toskose::tosca
