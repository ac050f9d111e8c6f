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

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "toskose/common/diagnostics.hpp"
#include "toskose/packager/builder.hpp"
#include "toskose/packager/compose.hpp"

namespace toskose::packager {

inline constexpr std::string_view kComposeFile = "docker-compose.yml";

// Stage names, in execution order.
inline constexpr std::string_view kStages[] = {
    "load-csar",      "parse-template", "validate-template", "load-config",  "validate-config",
    "complete-config", "toskose-model", "generate-contexts", "build-images", "generate-compose"};

struct PipelineOptions {
  std::filesystem::path output = ".";
  bool push = false;
  std::string docker_url;        // empty: dry run
  std::string image_repository;  // prefix for default image names
  std::filesystem::path scratch_parent = std::filesystem::temp_directory_path();
  std::shared_ptr<ImageBuilder> builder;  // overrides docker_url when set
  std::function<void(std::string_view stage)> on_stage;
};

struct PipelineResult {
  bool ok = false;
  std::string failed_stage;
  std::string error;  // error code name, or "validation" for dirty reports
  std::string message;
  ValidationReport diagnostics;
  config::ToskoseConfig completed;
  ComposeModel compose;
  std::string compose_text;
  std::vector<std::string> images;
  std::vector<std::string> contexts;  // container names with a context directory
};

// Runs every stage, stopping at the first error or dirty validation report.
// Outputs go below options.output: docker-compose.yml plus one directory per
// build context. Never throws for input problems.
PipelineResult run_pipeline(const std::filesystem::path& csar,
                            const std::optional<std::filesystem::path>& config_path,
                            const PipelineOptions& options);

}  // namespace toskose::packager
