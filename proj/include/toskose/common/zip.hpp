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

// Minimal PKZIP support: stored and deflated entries, no zip64, no encryption.
// Enough for CSAR archives produced by common tooling.
namespace toskose::zip {

struct Entry {
  std::string name;  // '/'-separated; directories end with '/'
  std::string data;
  bool executable = false;  // unix execute bit, when the archiver recorded one

  bool is_directory() const noexcept { return !name.empty() && name.back() == '/'; }
};

// Throws Error(corrupt_archive) on malformed input or CRC mismatch.
std::vector<Entry> read(std::string_view archive);

std::string write(const std::vector<Entry>& entries);

// Archive every file and directory under root (sorted, relative names).
std::string archive_directory(const std::filesystem::path& root);

// Unpack into dest. Entries escaping dest are rejected as corrupt.
void extract(std::string_view archive, const std::filesystem::path& dest);

}  // namespace toskose::zip
