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

#include "toskose/packager/pipeline.hpp"

#include "toskose/common/error.hpp"
#include "toskose/common/fs.hpp"
#include "toskose/tosca/csar.hpp"
#include "toskose/tosca/parser.hpp"
#include "toskose/tosca/topology.hpp"

namespace toskose::packager {
namespace {

struct StageFailed {};

class Runner {
 public:
  Runner(const PipelineOptions& options, PipelineResult& result) : options_(options), result_(result) {}

  template <typename Fn>
  auto stage(std::string_view name, Fn&& fn) {
    current_ = name;
    if (options_.on_stage) options_.on_stage(name);
    try {
      return fn();
    } catch (const Error& e) {
      result_.error = std::string(to_string(e.code()));
      result_.message = e.what();
    } catch (const std::exception& e) {
      result_.error = "io_error";
      result_.message = e.what();
    }
    result_.failed_stage = std::string(name);
    throw StageFailed{};
  }

  void check(const ValidationReport& report) {
    result_.diagnostics.merge(report);
    if (!report.clean()) {
      result_.failed_stage = current_;
      result_.error = "validation";
      result_.message = "validation failed";
      throw StageFailed{};
    }
  }

 private:
  const PipelineOptions& options_;
  PipelineResult& result_;
  std::string current_;
};

}  // namespace

PipelineResult run_pipeline(const std::filesystem::path& csar_path,
                            const std::optional<std::filesystem::path>& config_path,
                            const PipelineOptions& options) {
  PipelineResult result;
  Runner run(options, result);
  try {
    auto csar = run.stage("load-csar", [&] { return tosca::read_csar(csar_path, options.scratch_parent); });
    const auto fallback = csar_path.stem().string();
    auto templ = run.stage("parse-template", [&] {
      return tosca::parse_service_template(csar.read_entry_definitions(), fallback);
    });
    run.stage("validate-template", [&] {
      auto report = tosca::validate_topology(templ);
      report.merge(tosca::validate_artifacts(templ, csar));
      run.check(report);
      return 0;
    });
    auto given = run.stage("load-config", [&] {
      if (!config_path) return config::ToskoseConfig{};
      return config::parse_config(fs::read_file(*config_path));
    });
    run.stage("validate-config", [&] {
      run.check(config::validate_config(given, templ));
      return 0;
    });
    auto completed = run.stage("complete-config", [&] {
      auto c = config::complete_config(given, templ, {options.image_repository});
      auto report = config::validate_config(c, templ, config::ConfigStage::completed);
      // Warnings were already reported for the input.
      ValidationReport errors;
      for (const auto& d : report.items()) {
        if (d.severity == Severity::error) errors.add(d.code, d.node, d.message);
      }
      run.check(errors);
      return c;
    });
    result.completed = completed;
    auto model = run.stage("toskose-model", [&] { return enrich_model(templ, completed); });
    auto contexts = run.stage("generate-contexts", [&] { return generate_contexts(model, csar); });
    result.images = run.stage("build-images", [&] {
      std::filesystem::create_directories(options.output);
      auto builder = options.builder ? options.builder
                                      : std::shared_ptr<ImageBuilder>(make_builder(options.docker_url));
      return build_images(model, contexts, options.output, *builder, options.push);
    });
    for (const auto& c : contexts) result.contexts.push_back(c.container);
    run.stage("generate-compose", [&] {
      result.compose = generate_compose(model);
      result.compose_text = serialize_compose(result.compose);
      fs::write_file(options.output / kComposeFile, result.compose_text);
      return 0;
    });
    result.ok = true;
  } catch (const StageFailed&) {
    result.ok = false;
  }
  return result;
}

}  // namespace toskose::packager
