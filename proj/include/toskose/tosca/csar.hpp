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

#include "toskose/common/diagnostics.hpp"
#include "toskose/common/fs.hpp"
#include "toskose/tosca/model.hpp"

namespace toskose::tosca {

inline constexpr std::string_view kMetadataDir = "TOSCA-Metadata";
inline constexpr std::string_view kMetadataFile = "TOSCA.meta";
inline constexpr std::string_view kEntryDefinitionsKey = "Entry-Definitions";

// An unpacked CSAR. Owns its scratch directory; moving transfers ownership.
class CsarArchive {
 public:
  CsarArchive(fs::TempDir root, std::map<std::string, std::string> metadata,
              std::string entry_definitions);

  const std::filesystem::path& root() const noexcept { return root_.path(); }
  const std::map<std::string, std::string>& metadata() const noexcept { return metadata_; }
  // CSAR-relative path of the main template.
  const std::string& entry_definitions() const noexcept { return entry_definitions_; }

  std::string read_entry_definitions() const;
  // Absolute path of a CSAR-relative file, or empty when it does not exist
  // inside the archive.
  std::filesystem::path resolve(std::string_view relative) const;

 private:
  fs::TempDir root_;
  std::map<std::string, std::string> metadata_;
  std::string entry_definitions_;
};

// Unpack and check the archive layout. Scratch space is created below
// scratch_parent and removed when the archive is destroyed.
CsarArchive read_csar(const std::filesystem::path& path,
                      const std::filesystem::path& scratch_parent =
                          std::filesystem::temp_directory_path());

// "Key: value" lines of a TOSCA.meta file.
std::map<std::string, std::string> parse_metadata(std::string_view text);

// Every file artifact (operation implementations and non-image node
// artifacts) must exist inside the archive. Reports "missing-artifact" or
// "artifact-path".
ValidationReport validate_artifacts(const ServiceTemplate& t, const CsarArchive& csar);

}  // namespace toskose::tosca
