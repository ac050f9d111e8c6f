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
#include <map>
#include <string>
#include <vector>

#include "toskose/packager/model.hpp"
#include "toskose/tosca/csar.hpp"

namespace toskose::packager {

// Supervisor configuration of one hosting container: HTTP, supervisord and
// RPC interface settings, then one program per (component, operation).
// Throws Error(not_a_hosting_container).
std::string generate_supervisor_config(const EnrichedModel& m, const std::string& container);

// Context-relative path of a component file: "<component>/<file>" for
// operation implementations, "<component>/artifacts/<file>" otherwise.
std::string script_path(std::string_view component, std::string_view csar_path);
std::string artifact_path(std::string_view component, std::string_view csar_path);

enum class ContextKind { unit, manager };

struct FileSource {
  std::string content;          // used when `from` is empty
  std::filesystem::path from;   // file copied verbatim
  bool executable = false;
};

struct BuildContext {
  std::string container;
  ContextKind kind = ContextKind::unit;
  std::map<std::string, FileSource> files;  // relative path -> source
  std::string dockerfile;
};

// One unit context per hosting container plus the manager context.
// Throws Error(missing_artifact) when a CSAR path does not resolve.
std::vector<BuildContext> generate_contexts(const EnrichedModel& m, const tosca::CsarArchive& csar);

// Write files and Dockerfile below dir.
void materialize(const BuildContext& ctx, const std::filesystem::path& dir);

}  // namespace toskose::packager
