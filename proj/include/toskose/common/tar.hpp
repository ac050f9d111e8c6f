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

namespace toskose::tar {

// Uncompressed ustar archive of every regular file below root, paths
// relative to root, sorted, with mode 0755 or 0644 and mtime 0.
// Throws Error(io_error) for paths that do not fit the ustar name fields.
std::string archive_directory(const std::filesystem::path& root);

}  // namespace toskose::tar
