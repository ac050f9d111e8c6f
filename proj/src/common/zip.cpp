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

#include "toskose/common/zip.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdint>
#include <cstring>

#include "toskose/common/error.hpp"
#include "toskose/common/fs.hpp"

namespace toskose::zip {
namespace {

constexpr std::uint32_t kLocalHeaderSig = 0x04034b50;
constexpr std::uint32_t kCentralHeaderSig = 0x02014b50;
constexpr std::uint32_t kEndOfCentralSig = 0x06054b50;
constexpr std::size_t kEndOfCentralSize = 22;
constexpr std::uint16_t kMethodStored = 0;
constexpr std::uint16_t kMethodDeflate = 8;
// 1980-01-01 00:00, the DOS epoch; fixed so archives are reproducible.
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;

[[noreturn]] void corrupt(const std::string& what) {
  fail(Errc::corrupt_archive, "corrupt archive: " + what);
}

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  std::uint16_t u16(std::size_t at) const {
    need(at, 2);
    return static_cast<std::uint16_t>(byte(at) | (byte(at + 1) << 8));
  }
  std::uint32_t u32(std::size_t at) const {
    need(at, 4);
    return static_cast<std::uint32_t>(byte(at)) |
           (static_cast<std::uint32_t>(byte(at + 1)) << 8) |
           (static_cast<std::uint32_t>(byte(at + 2)) << 16) |
           (static_cast<std::uint32_t>(byte(at + 3)) << 24);
  }
  std::string_view slice(std::size_t at, std::size_t len) const {
    need(at, len);
    return data_.substr(at, len);
  }
  std::size_t size() const noexcept { return data_.size(); }

 private:
  unsigned byte(std::size_t at) const { return static_cast<unsigned char>(data_[at]); }
  void need(std::size_t at, std::size_t len) const {
    if (at > data_.size() || len > data_.size() - at) corrupt("truncated record");
  }
  std::string_view data_;
};

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t crc_of(std::string_view data) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(data.data()),
              static_cast<uInt>(data.size())));
}

std::string inflate_raw(std::string_view in, std::size_t expected) {
  std::string out(expected, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) corrupt("inflate init");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  auto produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected) corrupt("bad deflate stream");
  return out;
}

std::string deflate_raw(std::string_view in) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK) {
    fail(Errc::io_error, "deflate init failed");
  }
  std::string out(deflateBound(&zs, static_cast<uLong>(in.size())), '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) fail(Errc::io_error, "deflate failed");
  return out;
}

}  // namespace

std::vector<Entry> read(std::string_view archive) {
  Reader r(archive);
  if (r.size() < kEndOfCentralSize) corrupt("too small to be a zip file");

  // The end-of-central-directory record sits in the last 64 KiB + 22 bytes.
  std::size_t eocd = std::string_view::npos;
  std::size_t lowest = r.size() > 0xffff + kEndOfCentralSize
                           ? r.size() - 0xffff - kEndOfCentralSize
                           : 0;
  for (std::size_t at = r.size() - kEndOfCentralSize + 1; at-- > lowest;) {
    if (r.u32(at) == kEndOfCentralSig) {
      eocd = at;
      break;
    }
  }
  if (eocd == std::string_view::npos) corrupt("no end of central directory");

  const std::uint16_t count = r.u16(eocd + 10);
  const std::uint32_t cd_offset = r.u32(eocd + 16);
  if (cd_offset == 0xffffffffu) corrupt("zip64 archives are not supported");

  std::vector<Entry> entries;
  entries.reserve(count);
  std::size_t at = cd_offset;
  for (std::uint16_t i = 0; i < count; ++i) {
    if (r.u32(at) != kCentralHeaderSig) corrupt("bad central directory header");
    const std::uint16_t made_by = r.u16(at + 4);
    const std::uint16_t flags = r.u16(at + 8);
    const std::uint16_t method = r.u16(at + 10);
    const std::uint32_t crc = r.u32(at + 16);
    const std::uint32_t csize = r.u32(at + 20);
    const std::uint32_t usize = r.u32(at + 24);
    const std::uint16_t name_len = r.u16(at + 28);
    const std::uint16_t extra_len = r.u16(at + 30);
    const std::uint16_t comment_len = r.u16(at + 32);
    const std::uint32_t external = r.u32(at + 38);
    const std::uint32_t local = r.u32(at + 42);
    std::string name(r.slice(at + 46, name_len));
    at += 46u + name_len + extra_len + comment_len;

    if (flags & 0x1) corrupt("encrypted entry " + name);
    if (r.u32(local) != kLocalHeaderSig) corrupt("bad local header for " + name);
    const std::size_t data_at =
        local + 30u + r.u16(local + 26) + r.u16(local + 28);
    auto raw = r.slice(data_at, csize);

    Entry entry{std::move(name), {}};
    entry.executable = (made_by >> 8) == 3 && ((external >> 16) & 0111u) != 0;
    if (method == kMethodStored) {
      if (csize != usize) corrupt("size mismatch for " + entry.name);
      entry.data.assign(raw);
    } else if (method == kMethodDeflate) {
      entry.data = inflate_raw(raw, usize);
    } else {
      corrupt("unsupported compression method " + std::to_string(method));
    }
    if (crc_of(entry.data) != crc) corrupt("CRC mismatch for " + entry.name);
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::string write(const std::vector<Entry>& entries) {
  std::string out;
  std::string central;
  for (const auto& e : entries) {
    const bool dir = e.is_directory();
    std::string payload = dir ? std::string() : deflate_raw(e.data);
    std::uint16_t method = kMethodDeflate;
    if (dir || payload.size() >= e.data.size()) {
      payload = e.data;
      method = kMethodStored;
    }
    const std::uint32_t crc = crc_of(e.data);
    const auto offset = static_cast<std::uint32_t>(out.size());
    const auto name_len = static_cast<std::uint16_t>(e.name.size());

    put32(out, kLocalHeaderSig);
    put16(out, 20);
    put16(out, 0x0800);  // UTF-8 names
    put16(out, method);
    put16(out, 0);
    put16(out, kDosDate);
    put32(out, crc);
    put32(out, static_cast<std::uint32_t>(payload.size()));
    put32(out, static_cast<std::uint32_t>(e.data.size()));
    put16(out, name_len);
    put16(out, 0);
    out += e.name;
    out += payload;

    put32(central, kCentralHeaderSig);
    put16(central, (3 << 8) | 20);  // made by: unix
    put16(central, 20);
    put16(central, 0x0800);
    put16(central, method);
    put16(central, 0);
    put16(central, kDosDate);
    put32(central, crc);
    put32(central, static_cast<std::uint32_t>(payload.size()));
    put32(central, static_cast<std::uint32_t>(e.data.size()));
    put16(central, name_len);
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    const std::uint32_t mode = dir ? 040755u : (e.executable ? 0100755u : 0100644u);
    put32(central, (mode << 16) | (dir ? 0x10u : 0u));
    put32(central, offset);
    central += e.name;
  }
  const auto cd_offset = static_cast<std::uint32_t>(out.size());
  out += central;
  put32(out, kEndOfCentralSig);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put32(out, static_cast<std::uint32_t>(central.size()));
  put32(out, cd_offset);
  put16(out, 0);
  return out;
}

std::string archive_directory(const std::filesystem::path& root) {
  namespace stdfs = std::filesystem;
  std::vector<Entry> entries;
  for (const auto& item : stdfs::recursive_directory_iterator(root)) {
    auto rel = stdfs::relative(item.path(), root).generic_string();
    if (item.is_directory()) {
      entries.push_back({rel + "/", {}});
    } else if (item.is_regular_file()) {
      const auto perms = item.status().permissions();
      entries.push_back({rel, fs::read_file(item.path()),
                         (perms & stdfs::perms::owner_exec) != stdfs::perms::none});
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.name < b.name; });
  return write(entries);
}

void extract(std::string_view archive, const std::filesystem::path& dest) {
  namespace stdfs = std::filesystem;
  for (const auto& e : read(archive)) {
    std::string_view name = e.name;
    if (e.is_directory()) name.remove_suffix(1);
    if (!fs::is_contained_relative_path(name)) corrupt("entry escapes archive root: " + e.name);
    const auto target = dest / stdfs::path(std::string(name));
    if (e.is_directory()) {
      stdfs::create_directories(target);
    } else {
      fs::write_file(target, e.data);
      if (e.executable) {
        stdfs::permissions(target, stdfs::perms::owner_exec | stdfs::perms::group_exec |
                                       stdfs::perms::others_exec,
                           stdfs::perm_options::add);
      }
    }
  }
}

}  // namespace toskose::zip
