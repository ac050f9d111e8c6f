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

#include <spdlog/spdlog.h>
#include <yaml-cpp/yaml.h>

#include <CLI11.hpp>

#include "toskose/common/error.hpp"
#include "toskose/common/fs.hpp"
#include "toskose/manager/rest_api.hpp"

namespace {

using namespace toskose;
using namespace toskose::manager;

std::map<std::string, std::string> load_aliases(const std::string& path) {
  std::map<std::string, std::string> table;
  const auto doc = YAML::LoadFile(path);
  for (const auto& entry : doc) table[entry.first.as<std::string>()] = entry.second.as<std::string>();
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifecycle manager for the components of one application", "toskose-manager"};
  std::string template_path;
  std::string config_path;
  std::string host = "0.0.0.0";
  int port = 0;
  std::string mode;
  std::string aliases_path;
  std::string ui_dir = "/toskose/manager/ui";
  double operation_timeout = 120;
  app.add_option("--template", template_path, "TOSCA service template")
      ->envname("TOSKOSE_TEMPLATE")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--config", config_path, "Completed Toskose configuration")
      ->envname("TOSKOSE_CONFIG")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--host", host, "Listen address");
  app.add_option("--port", port, "Listen port (default: the configured manager port)")
      ->envname("TOSKOSE_MANAGER_PORT");
  app.add_option("--mode", mode, "production or development")->envname("TOSKOSE_APP_MODE");
  app.add_option("--aliases", aliases_path, "YAML map of alias to host:port, replacing DNS")
      ->envname("TOSKOSE_ALIASES")
      ->check(CLI::ExistingFile);
  app.add_option("--ui", ui_dir, "Dashboard bundle served under /ui")->envname("TOSKOSE_UI_DIR");
  app.add_option("--operation-timeout", operation_timeout, "Seconds before an operation times out")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  sigset_t wanted;
  sigemptyset(&wanted);
  sigaddset(&wanted, SIGTERM);
  sigaddset(&wanted, SIGINT);
  pthread_sigmask(SIG_BLOCK, &wanted, nullptr);
  ::signal(SIGPIPE, SIG_IGN);

  std::unique_ptr<AppManager> manager;
  RestSettings rest;
  try {
    auto model = load_app_model(fs::read_file(template_path), fs::read_file(config_path));
    const auto& mc = config::manager_config(model.config);
    ManagerOptions options;
    options.operation_timeout = std::chrono::milliseconds(static_cast<long long>(operation_timeout * 1000));
    if (!aliases_path.empty()) options.resolver = table_resolver(load_aliases(aliases_path));
    if (mode.empty()) mode = *mc.mode;
    rest = {host, port != 0 ? port : static_cast<int>(*mc.port), mode != "development", *mc.user, *mc.password,
            ui_dir};
    spdlog::info("loaded {}: {} containers, {} components", model.templ.name, model.containers().size(),
                 model.components.size());
    manager = std::make_unique<AppManager>(std::move(model), std::move(options));
  } catch (const Error& e) {
    spdlog::error("{} ({})", e.what(), to_string(e.code()));
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }

  RestServer server(*manager, rest);
  try {
    const int bound = server.start();
    spdlog::info("manager listening on {}:{} ({} mode)", host, bound, mode);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return 3;
  }
  int sig = 0;
  while (sigwait(&wanted, &sig) != 0) {
  }
  spdlog::info("received {}, stopping", strsignal(sig));
  server.stop();
  return 0;
}
