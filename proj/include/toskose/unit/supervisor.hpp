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

#include <sys/types.h>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "toskose/unit/unit_config.hpp"

namespace toskose::unit {

// Numbering follows Supervisor's process states.
enum class ProcessState {
  stopped = 0,
  starting = 10,
  running = 20,
  backoff = 30,
  stopping = 40,
  exited = 100,
  fatal = 200,
};

std::string_view to_string(ProcessState s) noexcept;
std::optional<ProcessState> state_from_name(std::string_view name) noexcept;

// The only transitions a program may take.
bool is_legal_transition(ProcessState from, ProcessState to) noexcept;

struct ProcessInfo {
  std::string name;
  ProcessState state = ProcessState::stopped;
  std::optional<pid_t> pid;      // iff STARTING, RUNNING or STOPPING
  std::optional<int> exitstatus; // iff EXITED
  double start_time = 0;         // epoch seconds, 0 when never started
  double stop_time = 0;
  std::string description;
  std::string spawnerr;
  std::string stdout_log;
  std::string stderr_log;
};

struct SupervisorOptions {
  // Reap any child (waitpid(-1)), including re-parented orphans. Only for a
  // process acting as PID 1 or child subreaper.
  bool reap_all = false;
  // Called under the state lock on every transition.
  std::function<void(const std::string&, ProcessState, ProcessState)> on_transition;
  // Orphans reaped in reap_all mode.
  std::function<void(pid_t, int)> on_orphan;
};

// Owns the programs of one unit. Every state change happens under one lock,
// so concurrent callers observe a single serial history. A control thread
// reaps children, promotes STARTING programs after startsecs and escalates
// to SIGKILL once a stop outlives its grace period.
class Supervisor {
 public:
  explicit Supervisor(UnitConfig config, SupervisorOptions options = {});
  ~Supervisor();

  Supervisor(const Supervisor&) = delete;
  Supervisor& operator=(const Supervisor&) = delete;

  // Throws Error with no_such_program or already_started. A spawn failure
  // leaves the program FATAL and throws Error(spawn_failed).
  ProcessInfo start(const std::string& name, bool wait);
  // Throws Error with no_such_program or not_running.
  ProcessInfo stop(const std::string& name, bool wait);

  ProcessInfo info(const std::string& name) const;
  // Sorted by name, taken at a single instant.
  std::vector<ProcessInfo> all_info() const;

  // At most `length` bytes from `offset`; empty past the end.
  std::string read_stdout(const std::string& name, long long offset, long long length) const;

  // One synchronous reaping pass; returns the number of children collected.
  std::size_t reap();

  // Stop every live program (grace semantics) and stop the control thread.
  // Idempotent.
  void shutdown();

  std::vector<std::string> names() const;
  const UnitConfig& config() const noexcept { return config_; }

 private:
  struct Program {
    ProgramSpec spec;
    ProcessState state = ProcessState::stopped;
    pid_t pid = 0;
    int pidfd = -1;
    std::optional<int> exitstatus;
    std::chrono::steady_clock::time_point started;
    std::chrono::steady_clock::time_point stop_requested;
    bool killed = false;
    double start_time = 0;
    double stop_time = 0;
    std::string spawnerr;
  };

  Program& find(const std::string& name);
  const Program& find(const std::string& name) const;
  ProcessInfo snapshot(const Program& p) const;
  void transition(Program& p, ProcessState to);
  void spawn(Program& p);
  void request_stop(Program& p);
  void on_exit(Program& p, int status);
  std::size_t reap_locked();
  void tick_locked();
  void control_loop();
  void wake();

  UnitConfig config_;
  SupervisorOptions options_;
  std::map<std::string, Program> programs_;
  mutable std::mutex mu_;
  std::condition_variable changed_;
  std::atomic<bool> quit_{false};
  bool shut_down_ = false;
  int wake_pipe_[2] = {-1, -1};
  std::thread control_;
  std::once_flag joined_;
};

}  // namespace toskose::unit
