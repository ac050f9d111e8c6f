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

#include <signal.h>
#include <sys/prctl.h>
#include <unistd.h>

#include <spdlog/sinks/basic_file_sink.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>

#include "toskose/common/error.hpp"
#include "toskose/unit/rpc_server.hpp"

namespace {

using namespace toskose;
using namespace toskose::unit;

spdlog::level::level_enum level_of(const std::string& name) {
  if (name == "DEBUG") return spdlog::level::debug;
  if (name == "WARNING") return spdlog::level::warn;
  if (name == "ERROR") return spdlog::level::err;
  return spdlog::level::info;
}

std::shared_ptr<spdlog::logger> make_logger(const UnitConfig& c) {
  std::vector<spdlog::sink_ptr> sinks{std::make_shared<spdlog::sinks::stderr_color_sink_mt>()};
  if (!c.supervisor.logfile.empty()) {
    std::filesystem::create_directories(c.supervisor.logfile.parent_path());
    sinks.push_back(std::make_shared<spdlog::sinks::basic_file_sink_mt>(c.supervisor.logfile.string()));
  }
  auto log = std::make_shared<spdlog::logger>("unit", sinks.begin(), sinks.end());
  log->set_level(level_of(c.supervisor.log_level));
  log->flush_on(spdlog::level::info);
  return log;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Process supervisor for one container", "toskose-unit"};
  std::string config_path = "supervisord.conf";
  app.add_option("-c,--config", config_path, "Unit configuration file")->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  // Taken with sigwait below. Threads inherit the mask; programs reset it.
  sigset_t wanted;
  sigemptyset(&wanted);
  sigaddset(&wanted, SIGTERM);
  sigaddset(&wanted, SIGINT);
  sigaddset(&wanted, SIGHUP);
  pthread_sigmask(SIG_BLOCK, &wanted, nullptr);
  ::signal(SIGPIPE, SIG_IGN);

  UnitConfig config;
  try {
    config = load_unit_config_file(config_path);
  } catch (const Error& e) {
    spdlog::error("{}: {} ({})", config_path, e.what(), to_string(e.code()));
    return 2;
  }
  auto log = make_logger(config);

  const bool pid1 = ::getpid() == 1;
  const bool subreaper = pid1 || ::prctl(PR_SET_CHILD_SUBREAPER, 1) == 0;
  SupervisorOptions options;
  options.reap_all = subreaper;
  options.on_transition = [log](const std::string& name, ProcessState from, ProcessState to) {
    log->info("{}: {} -> {}", name, to_string(from), to_string(to));
  };
  options.on_orphan = [log](pid_t pid, int status) { log->debug("reaped orphan {} (status {})", pid, status); };

  Supervisor supervisor(config, options);
  RpcServer server(supervisor, config.http);
  try {
    const int port = server.start();
    log->info("unit listening on {}:{} with {} programs", config.http.host.empty() ? "*" : config.http.host, port,
              config.programs.size());
  } catch (const Error& e) {
    log->error("{}", e.what());
    supervisor.shutdown();
    return 3;
  }
  for (const auto& [name, spec] : config.programs) {
    if (!spec.autostart) continue;
    try {
      supervisor.start(name, false);
    } catch (const Error& e) {
      log->warn("autostart {}: {}", name, e.what());
    }
  }

  int sig = 0;
  while (sigwait(&wanted, &sig) != 0 || sig == SIGHUP) {
  }
  log->info("received {}, stopping programs", strsignal(sig));
  supervisor.shutdown();
  server.stop();
  log->info("unit stopped");
  return 0;
}
