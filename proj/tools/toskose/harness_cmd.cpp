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

#include "harness_cmd.hpp"

#include <unistd.h>

#include <iostream>

#include <spdlog/spdlog.h>

#include <CLI11.hpp>

#include "toskose/common/error.hpp"
#include "toskose/common/fs.hpp"
#include "toskose/harness/harness.hpp"
#include "toskose/packager/pipeline.hpp"

namespace toskose::tools {
namespace {

namespace stdfs = std::filesystem;

constexpr std::string_view kStateDir = ".harness";
constexpr std::string_view kStateFile = "state.json";
constexpr std::string_view kManifest = "harness.yml";

stdfs::path self_dir() { return stdfs::read_symlink("/proc/self/exe").parent_path(); }

int up(const stdfs::path& dir, const std::string& manifest_path, stdfs::path unit_bin, stdfs::path manager_bin,
       double timeout) {
  const auto state = dir / kStateDir / kStateFile;
  if (stdfs::exists(state)) {
    spdlog::error("a deployment is already running from {}; run `toskose harness down` first", dir.string());
    return 1;
  }
  harness::LaunchOptions options;
  options.root = dir / kStateDir;
  options.unit_binary = unit_bin.empty() ? self_dir() / "toskose-unit" : unit_bin;
  options.manager_binary = manager_bin.empty() ? self_dir() / "toskose-manager" : manager_bin;
  options.ready_timeout = std::chrono::milliseconds(static_cast<long long>(timeout * 1000));
  const stdfs::path manifest = manifest_path.empty() ? dir / kManifest : stdfs::path(manifest_path);
  if (stdfs::exists(manifest)) options.manifest = harness::parse_manifest(fs::read_file(manifest));

  const auto compose = packager::parse_compose(fs::read_file(dir / packager::kComposeFile));
  std::map<std::string, stdfs::path> contexts;
  for (const auto& s : compose.services) {
    if (stdfs::is_directory(dir / s.name)) contexts[s.name] = dir / s.name;
  }
  auto d = harness::launch_local(compose, contexts, options);
  fs::write_file(state, d.to_json().dump(2) + "\n");
  for (const auto& p : d.processes) {
    spdlog::info("{} {} pid {} {}", harness::to_string(p.role), p.service, p.pid, p.address);
  }
  std::cout << nlohmann::json{{"alias_table", d.alias_table}, {"state", state.string()}}.dump() << "\n";
  return 0;
}

int down(const stdfs::path& dir) {
  const auto state = dir / kStateDir / kStateFile;
  if (!stdfs::exists(state)) {
    spdlog::info("nothing running from {}", dir.string());
    return 0;
  }
  auto d = harness::Deployment::from_json(nlohmann::json::parse(fs::read_file(state)));
  harness::teardown(d);
  stdfs::remove_all(dir / kStateDir);
  spdlog::info("stopped {} processes", d.processes.size());
  return 0;
}

}  // namespace

int harness_main(int argc, char** argv) {
  CLI::App app{"Run generated artifacts as local processes", "toskose harness"};
  app.require_subcommand(1);
  std::string dir;
  std::string manifest;
  std::string unit_bin;
  std::string manager_bin;
  double timeout = 15;
  auto* up_cmd = app.add_subcommand("up", "Launch units, manager and stubs");
  up_cmd->add_option("ARTIFACT_DIR", dir, "Output directory of the packager")->required()->check(CLI::ExistingDirectory);
  up_cmd->add_option("--manifest", manifest, "Stub manifest (default: ARTIFACT_DIR/harness.yml)")
      ->check(CLI::ExistingFile);
  up_cmd->add_option("--unit-binary", unit_bin, "toskose-unit executable");
  up_cmd->add_option("--manager-binary", manager_bin, "toskose-manager executable");
  up_cmd->add_option("--ready-timeout", timeout, "Seconds to wait for listeners")->check(CLI::PositiveNumber);
  auto* down_cmd = app.add_subcommand("down", "Stop a deployment and remove its sandboxes");
  down_cmd->add_option("ARTIFACT_DIR", dir, "Output directory of the packager")->required()->check(CLI::ExistingDirectory);
  CLI11_PARSE(app, argc, argv);

  try {
    if (up_cmd->parsed()) return up(dir, manifest, unit_bin, manager_bin, timeout);
    return down(dir);
  } catch (const Error& e) {
    spdlog::error("{} ({})", e.what(), to_string(e.code()));
    return 1;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}

}  // namespace toskose::tools
