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

#include "toskose/common/diagnostics.hpp"

#include <algorithm>

namespace toskose {

void ValidationReport::add(std::string code, std::string node,
                           std::string message, Severity severity) {
  items_.push_back(
      Diagnostic{std::move(code), std::move(node), std::move(message), severity});
}

void ValidationReport::merge(const ValidationReport& other) {
  items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

bool ValidationReport::clean() const noexcept {
  return std::none_of(items_.begin(), items_.end(), [](const Diagnostic& d) {
    return d.severity == Severity::error;
  });
}

bool ValidationReport::has(std::string_view code) const noexcept {
  return count(code) > 0;
}

std::size_t ValidationReport::count(std::string_view code) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(items_.begin(), items_.end(),
                    [&](const Diagnostic& d) { return d.code == code; }));
}

nlohmann::json to_json(const Diagnostic& d) {
  return nlohmann::json{
      {"code", d.code},
      {"node", d.node},
      {"message", d.message},
      {"severity", d.severity == Severity::error ? "error" : "warning"}};
}

nlohmann::json ValidationReport::to_json() const {
  auto out = nlohmann::json::array();
  for (const auto& d : items_) out.push_back(toskose::to_json(d));
  return out;
}

}  // namespace toskose
