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
#include <string>

#include "toskose/common/fs.hpp"
#include "toskose/common/zip.hpp"

namespace toskose::testing {

inline std::filesystem::path fixtures() { return TOSKOSE_FIXTURES_DIR; }
inline std::filesystem::path goldens() { return TOSKOSE_GOLDEN_DIR; }
inline std::filesystem::path bin_dir() { return TOSKOSE_BIN_DIR; }

inline std::filesystem::path thinking_tree() { return fixtures() / "thinking" / "csar"; }

// Pack the Thinking fixture tree into `dir/name`.
inline std::filesystem::path pack_thinking(const std::filesystem::path& dir,
                                           const std::string& name = "thinking.csar") {
  auto out = dir / name;
  fs::write_file(out, zip::archive_directory(thinking_tree()));
  return out;
}

inline std::string thinking_template() {
  return fs::read_file(thinking_tree() / "thinking.yaml");
}

}  // namespace toskose::testing
