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

#include "toskose/common/tar.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>

#include "toskose/common/error.hpp"
#include "toskose/common/fs.hpp"

namespace toskose::tar {
namespace {

namespace stdfs = std::filesystem;

void octal(char* field, std::size_t width, unsigned long long value) {
  std::snprintf(field, width, "%0*llo", static_cast<int>(width - 1), value);
}

std::string header(const std::string& path, std::size_t size, bool executable) {
  char h[512] = {};
  std::string name = path;
  std::string prefix;
  if (name.size() > 100) {
    const auto cut = name.rfind('/', 155);
    if (cut == std::string::npos || name.size() - cut - 1 > 100) {
      fail(Errc::io_error, "path too long for ustar: " + path);
    }
    prefix = name.substr(0, cut);
    name = name.substr(cut + 1);
  }
  std::memcpy(h, name.data(), name.size());
  octal(h + 100, 8, executable ? 0755 : 0644);
  octal(h + 108, 8, 0);
  octal(h + 116, 8, 0);
  octal(h + 124, 12, size);
  octal(h + 136, 12, 0);
  std::memset(h + 148, ' ', 8);
  h[156] = '0';
  std::memcpy(h + 257, "ustar", 6);
  std::memcpy(h + 263, "00", 2);
  std::memcpy(h + 345, prefix.data(), prefix.size());
  unsigned sum = 0;
  for (unsigned char c : h) sum += c;
  std::snprintf(h + 148, 8, "%06o", sum);
  return std::string(h, sizeof h);
}

}  // namespace

std::string archive_directory(const stdfs::path& root) {
  std::vector<std::string> files;
  for (const auto& e : stdfs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files.push_back(stdfs::relative(e.path(), root).generic_string());
  }
  std::sort(files.begin(), files.end());
  std::string out;
  for (const auto& rel : files) {
    const auto content = fs::read_file(root / rel);
    const auto perms = stdfs::status(root / rel).permissions();
    out += header(rel, content.size(), (perms & stdfs::perms::owner_exec) != stdfs::perms::none);
    out += content;
    out.append((512 - content.size() % 512) % 512, '\0');
  }
  out.append(1024, '\0');
  return out;
}

}  // namespace toskose::tar
