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

#include "toskose/tosca/csar.hpp"

#include <algorithm>
#include <cctype>

#include "toskose/common/error.hpp"
#include "toskose/common/zip.hpp"

namespace toskose::tosca {
namespace stdfs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

CsarArchive::CsarArchive(fs::TempDir root, std::map<std::string, std::string> metadata,
                         std::string entry_definitions)
    : root_(std::move(root)),
      metadata_(std::move(metadata)),
      entry_definitions_(std::move(entry_definitions)) {}

std::string CsarArchive::read_entry_definitions() const {
  return fs::read_file(root() / entry_definitions_);
}

stdfs::path CsarArchive::resolve(std::string_view relative) const {
  if (!fs::is_contained_relative_path(relative)) return {};
  auto p = root() / stdfs::path(std::string(relative));
  return stdfs::is_regular_file(p) ? p : stdfs::path{};
}

std::map<std::string, std::string> parse_metadata(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    auto colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    auto key = trim(line.substr(0, colon));
    if (!key.empty()) out[key] = trim(line.substr(colon + 1));
  }
  return out;
}

CsarArchive read_csar(const stdfs::path& path, const stdfs::path& scratch_parent) {
  const auto ext = lower(path.extension().string());
  if (ext != ".csar" && ext != ".zip") {
    fail(Errc::bad_extension,
         "unsupported archive extension '" + path.extension().string() +
             "' (expected .csar or .zip): " + path.string());
  }
  if (!stdfs::is_regular_file(path)) fail(Errc::io_error, "no such archive: " + path.string());

  fs::TempDir scratch(scratch_parent, "toskose-csar-");
  zip::extract(fs::read_file(path), scratch.path());

  const auto meta_dir = scratch.path() / kMetadataDir;
  if (!stdfs::is_directory(meta_dir)) {
    fail(Errc::missing_metadata, "archive has no " + std::string(kMetadataDir) + " directory");
  }
  const auto meta_file = meta_dir / kMetadataFile;
  if (!stdfs::is_regular_file(meta_file)) {
    fail(Errc::missing_entry_definitions,
         "archive has no " + std::string(kMetadataDir) + "/" + std::string(kMetadataFile));
  }
  auto metadata = parse_metadata(fs::read_file(meta_file));
  auto it = metadata.find(std::string(kEntryDefinitionsKey));
  if (it == metadata.end() || it->second.empty()) {
    fail(Errc::missing_entry_definitions, "metadata carries no Entry-Definitions key");
  }
  const std::string entry = it->second;
  if (!fs::is_contained_relative_path(entry) ||
      !stdfs::is_regular_file(scratch.path() / entry)) {
    fail(Errc::missing_entry_definitions, "Entry-Definitions target not found: " + entry);
  }
  return CsarArchive(std::move(scratch), std::move(metadata), entry);
}

ValidationReport validate_artifacts(const ServiceTemplate& t, const CsarArchive& csar) {
  ValidationReport report;
  auto check = [&](const NodeTemplate& node, const ArtifactRef& a) {
    if (a.is_image()) return;
    if (!fs::is_contained_relative_path(a.path)) {
      report.add("artifact-path", node.name,
                 "artifact '" + a.name + "' path escapes the archive root: " + a.path);
    } else if (csar.resolve(a.path).empty()) {
      report.add("missing-artifact", node.name,
                 "artifact '" + a.name + "' not found in archive: " + a.path);
    }
  };
  for (const auto& node : t.nodes) {
    for (const auto& a : node.artifacts) check(node, a);
    for (const auto& op : node.interface.operations) check(node, op.implementation);
  }
  return report;
}

}  // namespace toskose::tosca
