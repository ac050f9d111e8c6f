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

#include "toskose/unit/supervisor.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/syscall.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>

#include "toskose/common/error.hpp"

extern char** environ;

namespace toskose::unit {
namespace {

using Clock = std::chrono::steady_clock;

double epoch_now() {
  return std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();
}

std::chrono::nanoseconds seconds(double s) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::duration<double>(s));
}

int exit_code(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

std::string resolve_executable(const std::string& cmd, const std::map<std::string, std::string>& env) {
  if (cmd.find('/') != std::string::npos) return cmd;
  std::string path;
  if (auto it = env.find("PATH"); it != env.end()) {
    path = it->second;
  } else if (const char* p = std::getenv("PATH")) {
    path = p;
  } else {
    path = "/usr/local/bin:/usr/bin:/bin";
  }
  std::size_t start = 0;
  while (start <= path.size()) {
    auto end = path.find(':', start);
    if (end == std::string::npos) end = path.size();
    std::string dir = path.substr(start, end - start);
    if (dir.empty()) dir = ".";
    const auto candidate = dir + "/" + cmd;
    if (::access(candidate.c_str(), X_OK) == 0) return candidate;
    start = end + 1;
  }
  return {};
}

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

std::string uptime(double secs) {
  const auto total = static_cast<long long>(secs);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld:%02lld:%02lld", total / 3600, total / 60 % 60, total % 60);
  return buf;
}

}  // namespace

std::string_view to_string(ProcessState s) noexcept {
  switch (s) {
    case ProcessState::stopped: return "STOPPED";
    case ProcessState::starting: return "STARTING";
    case ProcessState::running: return "RUNNING";
    case ProcessState::backoff: return "BACKOFF";
    case ProcessState::stopping: return "STOPPING";
    case ProcessState::exited: return "EXITED";
    case ProcessState::fatal: return "FATAL";
  }
  return "UNKNOWN";
}

std::optional<ProcessState> state_from_name(std::string_view name) noexcept {
  for (auto s : {ProcessState::stopped, ProcessState::starting, ProcessState::running,
                 ProcessState::backoff, ProcessState::stopping, ProcessState::exited,
                 ProcessState::fatal}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

bool is_legal_transition(ProcessState from, ProcessState to) noexcept {
  using S = ProcessState;
  switch (from) {
    case S::stopped:
    case S::exited:
    case S::fatal:
      return to == S::starting;
    case S::starting:
      return to == S::running || to == S::exited || to == S::fatal || to == S::stopping;
    case S::running:
      return to == S::stopping || to == S::exited;
    case S::stopping:
      return to == S::stopped;
    case S::backoff:
      return false;
  }
  return false;
}

Supervisor::Supervisor(UnitConfig config, SupervisorOptions options)
    : config_(std::move(config)), options_(std::move(options)) {
  for (const auto& [name, spec] : config_.programs) programs_[name].spec = spec;
  if (::pipe2(wake_pipe_, O_CLOEXEC | O_NONBLOCK) != 0) {
    fail(Errc::io_error, std::string("pipe: ") + std::strerror(errno));
  }
  control_ = std::thread([this] { control_loop(); });
}

Supervisor::~Supervisor() {
  shutdown();
  close_fd(wake_pipe_[0]);
  close_fd(wake_pipe_[1]);
}

std::vector<std::string> Supervisor::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : programs_) out.push_back(name);
  return out;
}

Supervisor::Program& Supervisor::find(const std::string& name) {
  auto it = programs_.find(name);
  if (it == programs_.end()) fail(Errc::no_such_program, "no such program: " + name);
  return it->second;
}

const Supervisor::Program& Supervisor::find(const std::string& name) const {
  auto it = programs_.find(name);
  if (it == programs_.end()) fail(Errc::no_such_program, "no such program: " + name);
  return it->second;
}

ProcessInfo Supervisor::snapshot(const Program& p) const {
  ProcessInfo info;
  info.name = p.spec.name;
  info.state = p.state;
  if (p.pid > 0) info.pid = p.pid;
  if (p.state == ProcessState::exited) info.exitstatus = p.exitstatus;
  info.start_time = p.start_time;
  info.stop_time = p.stop_time;
  info.spawnerr = p.spawnerr;
  info.stdout_log = p.spec.stdout_log.string();
  info.stderr_log = p.spec.stderr_log.string();
  switch (p.state) {
    case ProcessState::stopped:
      info.description = p.start_time == 0 ? "Not started" : "Stopped";
      break;
    case ProcessState::running:
      info.description = "pid " + std::to_string(p.pid) + ", uptime " + uptime(epoch_now() - p.start_time);
      break;
    case ProcessState::exited:
      info.description = "exit status " + std::to_string(p.exitstatus.value_or(-1));
      break;
    case ProcessState::fatal:
      info.description = p.spawnerr;
      break;
    default:
      break;
  }
  return info;
}

void Supervisor::transition(Program& p, ProcessState to) {
  const auto from = p.state;
  p.state = to;
  if (options_.on_transition) options_.on_transition(p.spec.name, from, to);
  changed_.notify_all();
}

void Supervisor::wake() {
  const char b = 1;
  [[maybe_unused]] auto n = ::write(wake_pipe_[1], &b, 1);
}

void Supervisor::spawn(Program& p) {
  const auto& spec = p.spec;
  p.exitstatus.reset();
  p.spawnerr.clear();
  p.killed = false;
  p.start_time = epoch_now();
  p.started = Clock::now();
  transition(p, ProcessState::starting);

  auto fatal = [&](const std::string& why) {
    p.spawnerr = why;
    p.pid = 0;
    p.stop_time = epoch_now();
    transition(p, ProcessState::fatal);
    fail(Errc::spawn_failed, spec.name + ": " + why);
  };

  const auto exe = resolve_executable(spec.command.front(), spec.environment);
  if (exe.empty()) fatal("can't find command '" + spec.command.front() + "'");

  std::error_code ec;
  std::filesystem::create_directories(spec.stdout_log.parent_path(), ec);
  std::filesystem::create_directories(spec.stderr_log.parent_path(), ec);

  // Everything the child needs is prepared before fork: only
  // async-signal-safe calls happen in between fork and exec.
  std::vector<std::string> env_strings;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    std::string_view kv(*e);
    const auto key = kv.substr(0, kv.find('='));
    if (!spec.environment.contains(std::string(key))) env_strings.emplace_back(kv);
  }
  for (const auto& [k, v] : spec.environment) env_strings.push_back(k + "=" + v);
  std::vector<char*> envp;
  for (auto& s : env_strings) envp.push_back(s.data());
  envp.push_back(nullptr);
  std::vector<std::string> args = spec.command;
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  const std::string out_path = spec.stdout_log.string();
  const std::string err_path = spec.stderr_log.string();
  const std::string dir = spec.directory.string();

  int errpipe[2];
  if (::pipe2(errpipe, O_CLOEXEC) != 0) fatal(std::string("pipe: ") + std::strerror(errno));

  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(errpipe[0]);
    ::close(errpipe[1]);
    fatal(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    sigset_t none;
    sigemptyset(&none);
    ::sigprocmask(SIG_SETMASK, &none, nullptr);
    for (int sig : {SIGTERM, SIGINT, SIGHUP, SIGCHLD, SIGPIPE, SIGQUIT, SIGUSR1, SIGUSR2}) {
      ::signal(sig, SIG_DFL);
    }
    int err = 0;
    const int in = ::open("/dev/null", O_RDONLY);
    const int out = ::open(out_path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    const int errfd = ::open(err_path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (in < 0 || out < 0 || errfd < 0) err = errno;
    if (err == 0 && (::dup2(in, 0) < 0 || ::dup2(out, 1) < 0 || ::dup2(errfd, 2) < 0)) err = errno;
    if (err == 0 && !dir.empty() && ::chdir(dir.c_str()) != 0) err = errno;
    if (err == 0) {
      ::execve(exe.c_str(), argv.data(), envp.data());
      err = errno;
    }
    [[maybe_unused]] auto n = ::write(errpipe[1], &err, sizeof err);
    ::_exit(127);
  }

  ::close(errpipe[1]);
  ::setpgid(pid, pid);
  int child_errno = 0;
  ssize_t got;
  do {
    got = ::read(errpipe[0], &child_errno, sizeof child_errno);
  } while (got < 0 && errno == EINTR);
  ::close(errpipe[0]);

  if (got == static_cast<ssize_t>(sizeof child_errno)) {
    int status = 0;
    ::waitpid(pid, &status, 0);
    fatal(std::string("spawn error: ") + std::strerror(child_errno));
  }

  p.pid = pid;
  p.pidfd = static_cast<int>(::syscall(SYS_pidfd_open, pid, 0));
  if (spec.startsecs <= 0) transition(p, ProcessState::running);
  wake();
}

ProcessInfo Supervisor::start(const std::string& name, bool wait) {
  std::unique_lock lock(mu_);
  auto& p = find(name);
  if (shut_down_) fail(Errc::spawn_failed, "unit is shutting down");
  switch (p.state) {
    case ProcessState::starting:
    case ProcessState::running:
    case ProcessState::stopping:
      fail(Errc::already_started, name + " is " + std::string(to_string(p.state)));
    default:
      break;
  }
  spawn(p);
  if (wait) {
    const pid_t pid = p.pid;
    changed_.wait(lock, [&] { return p.state != ProcessState::starting || p.pid != pid; });
  }
  return snapshot(p);
}

void Supervisor::request_stop(Program& p) {
  p.stop_requested = Clock::now();
  p.killed = false;
  if (::kill(-p.pid, SIGTERM) != 0) ::kill(p.pid, SIGTERM);
  transition(p, ProcessState::stopping);
  wake();
}

ProcessInfo Supervisor::stop(const std::string& name, bool wait) {
  std::unique_lock lock(mu_);
  auto& p = find(name);
  if (p.state != ProcessState::starting && p.state != ProcessState::running) {
    fail(Errc::not_running, name + " is " + std::string(to_string(p.state)));
  }
  request_stop(p);
  if (wait) changed_.wait(lock, [&] { return p.state != ProcessState::stopping; });
  return snapshot(p);
}

ProcessInfo Supervisor::info(const std::string& name) const {
  std::lock_guard lock(mu_);
  return snapshot(find(name));
}

std::vector<ProcessInfo> Supervisor::all_info() const {
  std::lock_guard lock(mu_);
  std::vector<ProcessInfo> out;
  for (const auto& [_, p] : programs_) out.push_back(snapshot(p));
  return out;
}

std::string Supervisor::read_stdout(const std::string& name, long long offset,
                                    long long length) const {
  std::filesystem::path path;
  {
    std::lock_guard lock(mu_);
    path = find(name).spec.stdout_log;
  }
  if (offset < 0 || length < 0) fail(Errc::syntax_error, "offset and length must be non-negative");
  std::ifstream in(path, std::ios::binary);
  if (!in || length == 0) return {};
  in.seekg(0, std::ios::end);
  const auto size = static_cast<long long>(in.tellg());
  if (offset >= size) return {};
  const auto n = std::min(length, size - offset);
  std::string out(static_cast<std::size_t>(n), '\0');
  in.seekg(offset);
  in.read(out.data(), n);
  out.resize(static_cast<std::size_t>(in.gcount()));
  return out;
}

void Supervisor::on_exit(Program& p, int status) {
  close_fd(p.pidfd);
  p.pid = 0;
  p.stop_time = epoch_now();
  if (p.state == ProcessState::stopping) {
    p.exitstatus.reset();
    transition(p, ProcessState::stopped);
  } else {
    p.exitstatus = exit_code(status);
    transition(p, ProcessState::exited);
  }
}

std::size_t Supervisor::reap_locked() {
  std::size_t count = 0;
  if (options_.reap_all) {
    int status = 0;
    pid_t pid;
    while ((pid = ::waitpid(-1, &status, WNOHANG)) > 0) {
      ++count;
      auto it = std::find_if(programs_.begin(), programs_.end(),
                             [&](const auto& kv) { return kv.second.pid == pid; });
      if (it != programs_.end()) {
        on_exit(it->second, status);
      } else if (options_.on_orphan) {
        options_.on_orphan(pid, status);
      }
    }
    return count;
  }
  for (auto& [_, p] : programs_) {
    if (p.pid <= 0) continue;
    int status = 0;
    const pid_t r = ::waitpid(p.pid, &status, WNOHANG);
    if (r == p.pid) {
      ++count;
      on_exit(p, status);
    } else if (r < 0 && errno == ECHILD) {
      on_exit(p, 255 << 8);
    }
  }
  return count;
}

void Supervisor::tick_locked() {
  const auto now = Clock::now();
  for (auto& [_, p] : programs_) {
    if (p.state == ProcessState::starting && now - p.started >= seconds(p.spec.startsecs)) {
      transition(p, ProcessState::running);
    } else if (p.state == ProcessState::stopping && !p.killed &&
               now - p.stop_requested >= seconds(p.spec.stopwaitsecs)) {
      ::kill(-p.pid, SIGKILL);
      ::kill(p.pid, SIGKILL);
      p.killed = true;
    }
  }
}

std::size_t Supervisor::reap() {
  std::lock_guard lock(mu_);
  const auto n = reap_locked();
  tick_locked();
  return n;
}

void Supervisor::control_loop() {
  constexpr auto kIdle = std::chrono::milliseconds(200);
  while (!quit_) {
    std::vector<pollfd> fds{{wake_pipe_[0], POLLIN, 0}};
    auto timeout = kIdle;
    {
      std::lock_guard lock(mu_);
      const auto now = Clock::now();
      auto until = [&](Clock::time_point deadline) {
        auto ms = std::chrono::ceil<std::chrono::milliseconds>(deadline - now);
        timeout = std::clamp(ms, std::chrono::milliseconds(1), timeout);
      };
      for (const auto& [_, p] : programs_) {
        if (p.pidfd >= 0) fds.push_back({p.pidfd, POLLIN, 0});
        if (p.state == ProcessState::starting) until(p.started + seconds(p.spec.startsecs));
        if (p.state == ProcessState::stopping && !p.killed) {
          until(p.stop_requested + seconds(p.spec.stopwaitsecs));
        }
      }
    }
    ::poll(fds.data(), fds.size(), static_cast<int>(timeout.count()));
    char buf[64];
    while (::read(wake_pipe_[0], buf, sizeof buf) > 0) {
    }
    std::lock_guard lock(mu_);
    reap_locked();
    tick_locked();
  }
}

void Supervisor::shutdown() {
  {
    std::unique_lock lock(mu_);
    if (!shut_down_) {
      shut_down_ = true;
      for (auto& [_, p] : programs_) {
        if (p.state == ProcessState::starting || p.state == ProcessState::running) request_stop(p);
      }
    }
    changed_.wait(lock, [&] {
      return std::none_of(programs_.begin(), programs_.end(), [](const auto& kv) {
        return kv.second.state == ProcessState::stopping;
      });
    });
  }
  quit_ = true;
  wake();
  std::call_once(joined_, [this] {
    if (control_.joinable()) control_.join();
  });
}

}  // namespace toskose::unit
