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
#include <string_view>
#include <vector>

namespace toskose::fs {

namespace stdfs = std::filesystem;

std::string read_file(const stdfs::path& path);
void write_file(const stdfs::path& path, std::string_view content);

// Relative paths of every regular file below root, '/'-separated, sorted.
std::vector<std::string> list_files(const stdfs::path& root);

// True when `rel` is a forward-slash relative path that stays inside its root
// ("a/b", "a/./b"); false for absolute paths, backslashes, or ".." escapes.
bool is_contained_relative_path(std::string_view rel);

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const stdfs::path& parent = stdfs::temp_directory_path(),
                   std::string_view prefix = "toskose-");
  ~TempDir();

  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  TempDir(TempDir&& other) noexcept;
  TempDir& operator=(TempDir&& other) noexcept;

  const stdfs::path& path() const noexcept { return path_; }
  // Stop owning the directory; it will survive destruction.
  stdfs::path release() noexcept;

 private:
  stdfs::path path_;
};

}  // namespace toskose::fs
