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
#include <vector>

#include <json.hpp>

namespace toskose {

enum class Severity { error, warning };

// One finding of a validation pass: a stable code ("software-without-host"),
// the offending node (may be empty) and a human readable message.
struct Diagnostic {
  std::string code;
  std::string node;
  std::string message;
  Severity severity = Severity::error;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

class ValidationReport {
 public:
  void add(std::string code, std::string node, std::string message,
           Severity severity = Severity::error);
  void merge(const ValidationReport& other);

  // No error-severity diagnostics. Warnings do not make a report dirty.
  bool clean() const noexcept;
  bool empty() const noexcept { return items_.empty(); }
  bool has(std::string_view code) const noexcept;
  std::size_t count(std::string_view code) const noexcept;

  const std::vector<Diagnostic>& items() const noexcept { return items_; }

  nlohmann::json to_json() const;

 private:
  std::vector<Diagnostic> items_;
};

nlohmann::json to_json(const Diagnostic& d);

}  // namespace toskose
