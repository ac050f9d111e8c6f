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

#include "toskose/unit/unit_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <sstream>

#include "toskose/common/error.hpp"
#include "toskose/common/fs.hpp"

namespace toskose::unit {
namespace {

struct Section {
  std::string name;
  int line = 0;
  std::vector<std::pair<std::string, std::string>> items;
};

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void syntax(int line, const std::string& why) {
  fail(Errc::syntax_error, "line " + std::to_string(line) + ": " + why);
}

// Inline comments start with ';' or '#' preceded by whitespace, outside
// double quotes.
std::string strip_inline_comment(const std::string& value) {
  bool quoted = false;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (value[i] == '\\' && quoted) {
      ++i;
      continue;
    }
    if (value[i] == '"') quoted = !quoted;
    if (quoted || i == 0) continue;
    if ((value[i] == ';' || value[i] == '#') && std::isspace(static_cast<unsigned char>(value[i - 1]))) {
      return trim(std::string_view(value).substr(0, i));
    }
  }
  return value;
}

std::vector<Section> parse_ini(const std::string& document) {
  std::vector<Section> sections;
  std::istringstream in(document);
  std::string raw;
  int line_no = 0;
  std::string* last_value = nullptr;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = trim(raw);
    if (line.empty() || line.front() == ';' || line.front() == '#') {
      if (line.empty()) last_value = nullptr;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(raw.front())) && last_value != nullptr) {
      *last_value += "\n" + strip_inline_comment(line);
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') syntax(line_no, "unterminated section header");
      sections.push_back({trim(std::string_view(line).substr(1, line.size() - 2)), line_no, {}});
      if (sections.back().name.empty()) syntax(line_no, "empty section name");
      last_value = nullptr;
      continue;
    }
    if (sections.empty()) syntax(line_no, "key outside of any section");
    const auto sep = line.find_first_of("=:");
    if (sep == std::string::npos || sep == 0) syntax(line_no, "expected key=value");
    auto key = lower(trim(std::string_view(line).substr(0, sep)));
    auto value = strip_inline_comment(trim(std::string_view(line).substr(sep + 1)));
    auto& items = sections.back().items;
    auto it = std::find_if(items.begin(), items.end(), [&](const auto& kv) { return kv.first == key; });
    if (it != items.end()) syntax(line_no, "duplicate key '" + key + "'");
    items.emplace_back(std::move(key), std::move(value));
    last_value = &items.back().second;
  }
  return sections;
}

struct Expander {
  const EnvLookup& env;
  std::string here;
  std::string program;

  std::string lookup(const std::string& name) const {
    auto v = env(name);
    if (!v) fail(Errc::unresolved_env_var, "environment variable " + name + " is not set");
    return *v;
  }

  std::string operator()(const std::string& in) const {
    std::string out;
    for (std::size_t i = 0; i < in.size(); ++i) {
      const char c = in[i];
      if (c == '$' && i + 1 < in.size() && in[i + 1] == '$') {
        out += '$';
        ++i;
      } else if (c == '$' && i + 1 < in.size() && in[i + 1] == '{') {
        const auto end = in.find('}', i + 2);
        if (end == std::string::npos) fail(Errc::syntax_error, "unterminated ${ in: " + in);
        out += lookup(in.substr(i + 2, end - i - 2));
        i = end;
      } else if (c == '%' && i + 1 < in.size() && in[i + 1] == '%') {
        out += '%';
        ++i;
      } else if (c == '%' && i + 1 < in.size() && in[i + 1] == '(') {
        const auto end = in.find(")s", i + 2);
        if (end == std::string::npos) fail(Errc::syntax_error, "unterminated %( in: " + in);
        const auto name = in.substr(i + 2, end - i - 2);
        if (name == "here") {
          out += here;
        } else if (name == "program_name" && !program.empty()) {
          out += program;
        } else if (name.starts_with("ENV_")) {
          out += lookup(name.substr(4));
        } else {
          fail(Errc::syntax_error, "unknown expansion %(" + name + ")s");
        }
        i = end + 1;
      } else {
        out += c;
      }
    }
    return out;
  }
};

bool parse_bool(const std::string& v, const std::string& key) {
  const auto l = lower(v);
  if (l == "true" || l == "yes" || l == "on" || l == "1") return true;
  if (l == "false" || l == "no" || l == "off" || l == "0") return false;
  fail(Errc::syntax_error, key + ": not a boolean: " + v);
}

long long parse_int(const std::string& v, const std::string& key) {
  long long n = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size()) {
    fail(Errc::syntax_error, key + ": not an integer: " + v);
  }
  return n;
}

double parse_seconds(const std::string& v, const std::string& key) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || d < 0) {
    fail(Errc::syntax_error, key + ": not a non-negative number: " + v);
  }
  return d;
}

void apply_http(HttpSettings& http, const Section& s, const Expander& x) {
  for (const auto& [key, raw] : s.items) {
    const auto v = x(raw);
    if (key == "port") {
      const auto colon = v.rfind(':');
      std::string host = colon == std::string::npos ? "" : v.substr(0, colon);
      if (host == "*") host.clear();
      const auto port = parse_int(v.substr(colon == std::string::npos ? 0 : colon + 1), "port");
      if (port < 0 || port > 65535) fail(Errc::syntax_error, "port out of range: " + v);
      http.host = host;
      http.port = static_cast<int>(port);
    } else if (key == "username") {
      http.user = v;
    } else if (key == "password") {
      http.password = v;
    }
  }
}

void apply_supervisord(SupervisorSettings& sup, const Section& s, const Expander& x) {
  for (const auto& [key, raw] : s.items) {
    const auto v = x(raw);
    if (key == "loglevel") {
      auto level = v;
      std::transform(level.begin(), level.end(), level.begin(),
                     [](unsigned char c) { return std::toupper(c); });
      if (level == "WARN") level = "WARNING";
      if (level == "CRITICAL") level = "ERROR";
      if (level == "TRACE" || level == "BLATHER") level = "DEBUG";
      if (level != "DEBUG" && level != "INFO" && level != "WARNING" && level != "ERROR") {
        fail(Errc::syntax_error, "unknown log level " + v);
      }
      sup.log_level = level;
    } else if (key == "logfile") {
      sup.logfile = v;
    } else if (key == "childlogdir") {
      sup.childlogdir = v;
    }
  }
}

ProgramSpec parse_program(const std::string& name, const Section& s, const Expander& x) {
  ProgramSpec p;
  p.name = name;
  for (const auto& [key, raw] : s.items) {
    const auto v = x(raw);
    if (key == "command") {
      p.command = split_command(v);
    } else if (key == "directory") {
      p.directory = v;
    } else if (key == "environment") {
      p.environment = parse_environment(v);
    } else if (key == "autostart") {
      p.autostart = parse_bool(v, key);
    } else if (key == "autorestart") {
      p.autorestart = lower(v) != "unexpected" && parse_bool(v, key);
    } else if (key == "startsecs") {
      p.startsecs = parse_seconds(v, key);
    } else if (key == "stopwaitsecs") {
      p.stopwaitsecs = parse_seconds(v, key);
    } else if (key == "exitcodes") {
      p.exitcodes.clear();
      std::istringstream codes(v);
      std::string item;
      while (std::getline(codes, item, ',')) p.exitcodes.insert(static_cast<int>(parse_int(trim(item), key)));
    } else if (key == "stdout_logfile") {
      p.stdout_log = v;
    } else if (key == "stderr_logfile") {
      p.stderr_log = v;
    }
  }
  if (p.command.empty()) fail(Errc::syntax_error, "program " + name + " has no command");
  return p;
}

}  // namespace

EnvLookup process_environment() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  };
}

std::vector<std::string> split_command(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  bool in_word = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (in_word) out.push_back(std::move(cur));
      cur.clear();
      in_word = false;
    } else if (c == '\'') {
      const auto end = text.find('\'', i + 1);
      if (end == std::string::npos) fail(Errc::syntax_error, "unterminated quote in: " + text);
      cur += text.substr(i + 1, end - i - 1);
      i = end;
      in_word = true;
    } else if (c == '"') {
      ++i;
      for (; i < text.size() && text[i] != '"'; ++i) {
        if (text[i] == '\\' && i + 1 < text.size() &&
            (text[i + 1] == '"' || text[i + 1] == '\\' || text[i + 1] == '$')) {
          ++i;
        }
        cur += text[i];
      }
      if (i >= text.size()) fail(Errc::syntax_error, "unterminated quote in: " + text);
      in_word = true;
    } else if (c == '\\' && i + 1 < text.size()) {
      cur += text[++i];
      in_word = true;
    } else {
      cur += c;
      in_word = true;
    }
  }
  if (in_word) out.push_back(std::move(cur));
  return out;
}

std::map<std::string, std::string> parse_environment(const std::string& text) {
  std::map<std::string, std::string> out;
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  while (true) {
    skip_space();
    if (i >= text.size()) break;
    const auto eq = text.find('=', i);
    if (eq == std::string::npos) fail(Errc::syntax_error, "environment entry without '=': " + text.substr(i));
    const auto key = trim(std::string_view(text).substr(i, eq - i));
    if (key.empty()) fail(Errc::syntax_error, "environment entry without a name");
    i = eq + 1;
    std::string value;
    if (i < text.size() && (text[i] == '"' || text[i] == '\'')) {
      const char q = text[i++];
      for (; i < text.size() && text[i] != q; ++i) {
        if (q == '"' && text[i] == '\\' && i + 1 < text.size()) ++i;
        value += text[i];
      }
      if (i >= text.size()) fail(Errc::syntax_error, "unterminated quote in environment");
      ++i;
      skip_space();
      if (i < text.size() && text[i] != ',') fail(Errc::syntax_error, "expected ',' after quoted value");
    } else {
      const auto comma = text.find(',', i);
      value = trim(std::string_view(text).substr(i, comma == std::string::npos ? std::string::npos : comma - i));
      i = comma == std::string::npos ? text.size() : comma;
    }
    out[key] = value;
    if (i < text.size() && text[i] == ',') ++i;
  }
  return out;
}

UnitConfig load_unit_config(const std::string& document, const EnvLookup& env,
                            const std::filesystem::path& here) {
  UnitConfig config;
  std::vector<std::pair<std::string, const Section*>> programs;
  const auto sections = parse_ini(document);
  std::set<std::string> seen;
  Expander base{env, here.string(), {}};

  for (const auto& s : sections) {
    if (s.name.starts_with("program:")) {
      const auto name = trim(std::string_view(s.name).substr(8));
      if (name.empty()) syntax(s.line, "program section without a name");
      for (const auto& [other, _] : programs) {
        if (other == name) fail(Errc::duplicate_program, "program '" + name + "' is defined twice");
      }
      programs.emplace_back(name, &s);
      continue;
    }
    if (!seen.insert(s.name).second) syntax(s.line, "duplicate section [" + s.name + "]");
    if (s.name == "inet_http_server") {
      apply_http(config.http, s, base);
    } else if (s.name == "supervisord") {
      apply_supervisord(config.supervisor, s, base);
    }
  }

  if (config.supervisor.childlogdir.empty()) {
    config.supervisor.childlogdir = here / "logs";
  }
  for (const auto& [name, section] : programs) {
    Expander x{env, here.string(), name};
    auto p = parse_program(name, *section, x);
    if (p.stdout_log.empty()) p.stdout_log = config.supervisor.childlogdir / name / "stdout.log";
    if (p.stderr_log.empty()) p.stderr_log = config.supervisor.childlogdir / name / "stderr.log";
    config.programs.emplace(name, std::move(p));
  }
  return config;
}

UnitConfig load_unit_config_file(const std::filesystem::path& path) {
  const auto abs = std::filesystem::absolute(path);
  return load_unit_config(fs::read_file(abs), process_environment(), abs.parent_path());
}

}  // namespace toskose::unit
