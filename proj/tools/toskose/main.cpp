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

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <iostream>

#include "harness_cmd.hpp"
#include "toskose/packager/pipeline.hpp"

namespace {

using toskose::packager::PipelineOptions;
using toskose::packager::PipelineResult;

void emit_json(const nlohmann::json& j) { std::cout << j.dump() << '\n' << std::flush; }

int package(int argc, char** argv) {
  CLI::App app{"Generate deployment artifacts for a TOSCA application", "toskose"};
  std::string csar;
  std::string config;
  PipelineOptions o;
  std::string output = ".";
  bool quiet = false;
  bool debug = false;
  app.add_option("CSAR_PATH", csar, "CSAR archive of the application")->required()->check(CLI::ExistingFile);
  app.add_option("CONFIG_PATH", config, "Toskose configuration file")->check(CLI::ExistingFile);
  app.add_option("-o,--output-path", output, "Directory where to place the generated artifacts");
  app.add_flag("-p,--enable-push", o.push, "Push the built images");
  app.add_option("--docker-url", o.docker_url, "Container engine API (http://host:port or unix://path); dry run when unset");
  app.add_option("--repository", o.image_repository, "Repository prefix for default image names");
  app.add_flag("-q,--quiet", quiet, "JSON-lines diagnostics on stdout, nothing else");
  app.add_flag("--debug", debug, "Verbose logging");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  auto log = spdlog::stderr_color_mt("toskose");
  log->set_pattern("%^%l%$: %v");
  log->set_level(quiet ? spdlog::level::off : debug ? spdlog::level::debug : spdlog::level::info);

  o.output = output;
  o.on_stage = [&](std::string_view stage) {
    log->debug("stage {}", stage);
    if (quiet) emit_json({{"event", "stage"}, {"stage", stage}});
  };
  const PipelineResult r = toskose::packager::run_pipeline(csar, config.empty() ? std::nullopt : std::optional<std::filesystem::path>(config), o);

  for (const auto& d : r.diagnostics.items()) {
    if (quiet) {
      auto j = toskose::to_json(d);
      j["event"] = "diagnostic";
      emit_json(j);
    } else if (d.severity == toskose::Severity::warning) {
      log->warn("{} [{}] {}", d.code, d.node, d.message);
    } else {
      log->error("{} [{}] {}", d.code, d.node, d.message);
    }
  }
  if (!r.ok) {
    if (quiet) {
      emit_json({{"event", "failed"}, {"stage", r.failed_stage}, {"error", r.error}, {"message", r.message}});
    } else {
      log->error("{} failed: {} ({})", r.failed_stage, r.message, r.error);
    }
    return 1;
  }
  const auto compose = (o.output / toskose::packager::kComposeFile).string();
  if (quiet) {
    emit_json({{"event", "done"}, {"compose", compose}, {"images", r.images}, {"contexts", r.contexts}});
  } else {
    for (const auto& c : r.contexts) log->info("context {}", (o.output / c).string());
    for (const auto& i : r.images) log->info("image {}", i);
    log->info("compose file {}", compose);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1 && std::string_view(argv[1]) == "harness") return toskose::tools::harness_main(argc - 1, argv + 1);
  return package(argc, argv);
}
