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

#include "toskose/harness/harness.hpp"

#include <fcntl.h>
#include <netinet/in.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/syscall.h>
#include <sys/wait.h>
#include <unistd.h>

#include <arpa/inet.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include <yaml-cpp/yaml.h>

#include "toskose/common/error.hpp"
#include "toskose/common/fs.hpp"
#include "toskose/packager/model.hpp"

extern char** environ;

namespace toskose::harness {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr std::string_view kStubPort = "${STUB_PORT}";

// `n` distinct free ports, all bound at once.
std::vector<int> free_ports(std::size_t n) {
  std::vector<int> fds;
  std::vector<int> ports;
  auto close_all = [&] {
    for (int fd : fds) ::close(fd);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    socklen_t len = sizeof addr;
    if (fd < 0 || ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
        ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
      const std::string why = std::strerror(errno);
      if (fd >= 0) ::close(fd);
      close_all();
      fail(Errc::port_exhausted, "no free local port: " + why);
    }
    fds.push_back(fd);
    ports.push_back(ntohs(addr.sin_port));
  }
  close_all();
  return ports;
}

bool accepting(const std::string& address) {
  const auto colon = address.rfind(':');
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<uint16_t>(std::stoi(address.substr(colon + 1))));
  if (::inet_pton(AF_INET, address.substr(0, colon).c_str(), &addr.sin_addr) != 1) return false;
  const int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) return false;
  const bool ok = ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0;
  ::close(fd);
  return ok;
}

// Any live (non-zombie) process in process group `pgid`.
bool group_alive(pid_t pgid) {
  if (::kill(-pgid, 0) != 0) return false;
  for (const auto& entry : stdfs::directory_iterator("/proc")) {
    const auto name = entry.path().filename().string();
    if (name.empty() || name.find_first_not_of("0123456789") != std::string::npos) continue;
    std::ifstream in(entry.path() / "stat");
    std::string stat((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto paren = stat.rfind(')');
    if (paren == std::string::npos) continue;
    std::istringstream rest(stat.substr(paren + 2));
    char state = 0;
    long ppid = 0;
    long pgrp = 0;
    if (rest >> state >> ppid >> pgrp && pgrp == pgid && state != 'Z') return true;
  }
  return false;
}

// The session leader is reaped when it is our child; the rest of its group
// is polled.
bool gone(pid_t pid) {
  int status = 0;
  if (::waitpid(pid, &status, WNOHANG) == pid) return !group_alive(pid);
  if (group_alive(pid)) return false;
  ::waitpid(pid, &status, 0);
  return true;
}

bool leader_exited(pid_t pid) {
  int status = 0;
  const pid_t r = ::waitpid(pid, &status, WNOHANG);
  if (r == pid) return true;
  if (r == 0 || group_alive(pid)) return false;
  ::waitpid(pid, &status, 0);
  return true;
}

std::string tail_of(const stdfs::path& log) {
  std::string text;
  try {
    text = fs::read_file(log);
  } catch (const std::exception&) {
    return "";
  }
  constexpr std::size_t kTail = 4000;
  return text.size() > kTail ? text.substr(text.size() - kTail) : text;
}

using Env = std::map<std::string, std::string>;

Env inherited_env() {
  Env env;
  for (char** e = environ; *e != nullptr; ++e) {
    const std::string kv(*e);
    const auto eq = kv.find('=');
    if (eq != std::string::npos) env[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return env;
}

// fork + exec into a new session with output sent to `log`.
pid_t spawn(const std::vector<std::string>& args, const Env& env, const stdfs::path& cwd, const stdfs::path& log) {
  std::vector<std::string> env_strings;
  for (const auto& [k, v] : env) env_strings.push_back(k + "=" + v);
  std::vector<char*> argv;
  for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  std::vector<char*> envp;
  for (const auto& e : env_strings) envp.push_back(const_cast<char*>(e.c_str()));
  envp.push_back(nullptr);
  const std::string dir = cwd.string();
  const int out = ::open(log.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (out < 0) fail(Errc::io_error, "cannot open " + log.string() + ": " + std::strerror(errno));

  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(out);
    fail(Errc::io_error, std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::setsid();
    sigset_t none;
    sigemptyset(&none);
    ::sigprocmask(SIG_SETMASK, &none, nullptr);
    struct sigaction dfl{};
    dfl.sa_handler = SIG_DFL;
    for (int s : {SIGPIPE, SIGTERM, SIGINT, SIGHUP, SIGCHLD}) ::sigaction(s, &dfl, nullptr);
    const int in = ::open("/dev/null", O_RDONLY);
    ::dup2(in, 0);
    ::dup2(out, 1);
    ::dup2(out, 2);
    ::syscall(SYS_close_range, 3U, ~0U, 0U);
    if (::chdir(dir.c_str()) != 0) _exit(126);
    ::execve(argv[0], argv.data(), envp.data());
    constexpr char kMsg[] = "harness: exec failed\n";
    [[maybe_unused]] auto n = ::write(2, kMsg, sizeof kMsg - 1);
    _exit(127);
  }
  ::close(out);
  return pid;
}

std::string env_of(const packager::ServiceSpec& s, std::string_view key) {
  for (const auto& [k, v] : s.environment) {
    if (k == key) return v;
  }
  return "";
}

Role role_of(const packager::ServiceSpec& s) {
  for (const auto& [k, _] : s.environment) {
    if (k == "TOSKOSE_MANAGER_PORT") return Role::manager;
  }
  for (const auto& [k, _] : s.environment) {
    if (k == "SUPERVISORD_PORT") return Role::unit;
  }
  return Role::stub;
}

// ENV pairs of a manager Dockerfile pointing into its config directory,
// rebased onto the sandbox.
Env manager_paths(const stdfs::path& sandbox) {
  Env out;
  std::istringstream in(fs::read_file(sandbox / "Dockerfile"));
  const std::string prefix = std::string(packager::kManagerConfigDir) + "/";
  for (std::string line; std::getline(in, line);) {
    if (!line.starts_with("ENV ")) continue;
    std::istringstream words(line.substr(4));
    for (std::string kv; words >> kv;) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) continue;
      const auto value = kv.substr(eq + 1);
      if (value.starts_with(prefix)) out[kv.substr(0, eq)] = (sandbox / value.substr(prefix.size())).string();
    }
  }
  return out;
}

std::string substitute_port(std::string command, int port) {
  for (auto at = command.find(kStubPort); at != std::string::npos; at = command.find(kStubPort, at)) {
    command.replace(at, kStubPort.size(), std::to_string(port));
  }
  return command;
}

void stop_process(const LocalProcess& p, std::chrono::milliseconds grace) {
  if (p.pid <= 0 || gone(p.pid)) return;
  ::kill(-p.pid, SIGTERM);
  const auto deadline = Clock::now() + grace;
  while (Clock::now() < deadline) {
    if (gone(p.pid)) return;
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  ::kill(-p.pid, SIGKILL);
  ::kill(p.pid, SIGKILL);
  while (!gone(p.pid)) std::this_thread::sleep_for(std::chrono::milliseconds(10));
}

}  // namespace

Manifest parse_manifest(const std::string& document) {
  Manifest m;
  try {
    const auto doc = YAML::Load(document);
    if (!doc || doc.IsNull()) return m;
    for (const auto& entry : doc["stubs"]) {
      m.stubs[entry.first.as<std::string>()] = {entry.second["command"].as<std::string>()};
    }
  } catch (const YAML::Exception& e) {
    fail(Errc::syntax_error, std::string("harness manifest: ") + e.what());
  }
  return m;
}

std::string_view to_string(Role r) noexcept {
  switch (r) {
    case Role::unit: return "unit";
    case Role::manager: return "manager";
    case Role::stub: return "stub";
  }
  return "stub";
}

const LocalProcess* Deployment::find(std::string_view service) const noexcept {
  for (const auto& p : processes) {
    if (p.service == service) return &p;
  }
  return nullptr;
}

json Deployment::to_json() const {
  json procs = json::array();
  for (const auto& p : processes) {
    procs.push_back({{"service", p.service},
                     {"role", to_string(p.role)},
                     {"pid", p.pid},
                     {"address", p.address},
                     {"log", p.log.string()}});
  }
  json boxes = json::object();
  for (const auto& [k, v] : sandboxes) boxes[k] = v.string();
  return {{"root", root.string()},
          {"compose", packager::serialize_compose(compose)},
          {"alias_table", alias_table},
          {"sandboxes", boxes},
          {"processes", procs},
          {"stubs", stubs},
          {"torn_down", torn_down}};
}

Deployment Deployment::from_json(const json& j) {
  Deployment d;
  d.root = j.at("root").get<std::string>();
  d.compose = packager::parse_compose(j.at("compose").get<std::string>());
  d.alias_table = j.at("alias_table").get<std::map<std::string, std::string>>();
  for (const auto& [k, v] : j.at("sandboxes").items()) d.sandboxes[k] = v.get<std::string>();
  for (const auto& p : j.at("processes")) {
    const auto role = p.at("role").get<std::string>();
    d.processes.push_back({p.at("service"), role == "unit" ? Role::unit : role == "manager" ? Role::manager : Role::stub,
                           p.at("pid").get<pid_t>(), p.at("address"), p.at("log").get<std::string>()});
  }
  d.stubs = j.at("stubs").get<std::set<std::string>>();
  d.torn_down = j.value("torn_down", false);
  return d;
}

Deployment launch_local(const packager::ComposeModel& compose, const std::map<std::string, stdfs::path>& contexts,
                        const LaunchOptions& options) {
  Deployment d;
  d.compose = compose;
  d.root = options.root;
  stdfs::create_directories(d.root);

  const auto ports = free_ports(compose.services.size());
  std::map<std::string, int> port_of;
  for (std::size_t i = 0; i < compose.services.size(); ++i) {
    const auto& s = compose.services[i];
    port_of[s.name] = ports[i];
    const auto address = options.host + ":" + std::to_string(ports[i]);
    d.alias_table[s.name] = address;
    for (const auto& alias : s.aliases) d.alias_table[alias] = address;
  }

  const auto base_env = inherited_env();
  try {
    for (const auto& s : compose.services) {
      const auto role = role_of(s);
      const int port = port_of.at(s.name);
      const auto sandbox = d.root / s.name;
      stdfs::remove_all(sandbox);
      stdfs::create_directories(sandbox);
      d.sandboxes[s.name] = sandbox;
      LocalProcess p{s.name, role, 0, "", sandbox / (std::string(to_string(role)) + ".log")};

      if (role == Role::stub) {
        d.stubs.insert(s.name);
        const auto stub = options.manifest.stubs.find(s.name);
        if (stub == options.manifest.stubs.end()) continue;
        if (stub->second.command.find(kStubPort) != std::string::npos) p.address = d.alias_table.at(s.name);
        auto env = base_env;
        for (const auto& [k, v] : s.environment) env[k] = v;
        env["STUB_PORT"] = std::to_string(port);
        p.pid = spawn({"/bin/sh", "-c", substitute_port(stub->second.command, port)}, env, sandbox, p.log);
        d.processes.push_back(p);
        continue;
      }

      const auto ctx = contexts.find(s.name);
      if (ctx == contexts.end()) fail(Errc::io_error, "no build context for service " + s.name);
      stdfs::copy(ctx->second, sandbox, stdfs::copy_options::recursive | stdfs::copy_options::overwrite_existing);
      auto env = base_env;
      for (const auto& [k, v] : s.environment) env[k] = v;
      p.address = d.alias_table.at(s.name);
      if (role == Role::unit) {
        env["SUPERVISORD_PORT"] = std::to_string(port);
        p.pid = spawn({options.unit_binary.string(), "--config", (sandbox / packager::kSupervisorConfig).string()},
                      env, sandbox, p.log);
      } else {
        env["TOSKOSE_MANAGER_PORT"] = std::to_string(port);
        for (const auto& [k, v] : manager_paths(sandbox)) env[k] = v;
        YAML::Emitter out;
        out << YAML::BeginMap;
        for (const auto& [alias, address] : d.alias_table) out << YAML::Key << alias << YAML::Value << address;
        out << YAML::EndMap;
        fs::write_file(sandbox / "aliases.yml", std::string(out.c_str()) + "\n");
        env["TOSKOSE_ALIASES"] = (sandbox / "aliases.yml").string();
        env.erase("TOSKOSE_UI_DIR");
        p.pid = spawn({options.manager_binary.string(), "--host", options.host}, env, sandbox, p.log);
      }
      d.processes.push_back(p);
    }

    // Wait for every listener; any process that dies meanwhile fails the launch.
    const auto deadline = Clock::now() + options.ready_timeout;
    std::set<std::string> pending;
    for (const auto& p : d.processes) pending.insert(p.service);
    while (!pending.empty()) {
      for (const auto& p : d.processes) {
        if (!pending.contains(p.service)) continue;
        if (leader_exited(p.pid)) {
          fail(Errc::unit_failed_to_start, p.service + " exited during startup:\n" + tail_of(p.log));
        }
        if (p.address.empty() || accepting(p.address)) pending.erase(p.service);
      }
      if (pending.empty()) break;
      if (Clock::now() >= deadline) {
        const auto& first = *d.find(*pending.begin());
        fail(Errc::unit_failed_to_start, first.service + " not ready in time:\n" + tail_of(first.log));
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
  } catch (...) {
    teardown(d, std::chrono::milliseconds(5000));
    throw;
  }
  return d;
}

std::string resolve_alias(const Deployment& d, const std::string& alias) {
  const auto it = d.alias_table.find(alias);
  if (it == d.alias_table.end()) fail(Errc::unknown_alias, "unknown alias " + alias);
  return it->second;
}

void teardown(Deployment& d, std::chrono::milliseconds grace) {
  if (d.torn_down) return;
  for (auto it = d.processes.rbegin(); it != d.processes.rend(); ++it) stop_process(*it, grace);
  for (const auto& [_, dir] : d.sandboxes) {
    std::error_code ec;
    stdfs::remove_all(dir, ec);
  }
  d.torn_down = true;
}

}  // namespace toskose::harness
