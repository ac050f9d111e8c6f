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

#include "toskose/packager/artifacts.hpp"

#include <sys/stat.h>

#include "toskose/common/error.hpp"
#include "toskose/common/fs.hpp"

namespace toskose::packager {
namespace {

namespace stdfs = std::filesystem;

// Text placed in the supervisor config is expanded by the unit, so literal
// '%' and '$' are doubled; quotes and backslashes are escaped for the
// double-quoted forms used below.
std::string escaped(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '\n' || c == '\r') fail(Errc::validation_failed, "value with a line break: " + std::string(s));
    if (c == '"' || c == '\\') out += '\\';
    if (c == '%' || c == '$') out += c;
    out += c;
  }
  return out;
}

std::string dquoted(std::string_view s) { return "\"" + escaped(s) + "\""; }

std::string literal(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '%' || c == '$') out += c;
    out += c;
  }
  return out;
}

std::string basename_of(std::string_view csar_path) {
  return stdfs::path(std::string(csar_path)).filename().string();
}

const ContainerPlan& hosting_plan(const EnrichedModel& m, const std::string& container) {
  const auto* c = m.find(container);
  if (c == nullptr || c->role != ContainerRole::hosting) {
    fail(Errc::not_a_hosting_container, container + " hosts no software component");
  }
  return *c;
}

EnvList component_inputs(const tosca::NodeTemplate& n) {
  EnvList env;
  for (const auto& op : n.interface.operations) {
    for (const auto& [name, value] : op.inputs.items()) {
      auto key = input_env_name(name);
      const bool seen = std::any_of(env.begin(), env.end(), [&](const auto& kv) { return kv.first == key; });
      if (!seen) env.emplace_back(std::move(key), input_value_text(value));
    }
  }
  return env;
}

void add_file(BuildContext& ctx, const std::string& rel, FileSource src) {
  if (!fs::is_contained_relative_path(rel)) fail(Errc::missing_artifact, "artifact path escapes the context: " + rel);
  auto [it, inserted] = ctx.files.emplace(rel, std::move(src));
  if (!inserted) fail(Errc::validation_failed, ctx.container + ": two artifacts map to " + rel);
}

FileSource from_csar(const tosca::CsarArchive& csar, const std::string& node, const std::string& path) {
  const auto abs = csar.resolve(path);
  if (abs.empty()) fail(Errc::missing_artifact, node + ": " + path + " is not in the CSAR");
  const auto perms = stdfs::status(abs).permissions();
  return FileSource{{}, abs, (perms & stdfs::perms::owner_exec) != stdfs::perms::none};
}

std::string unit_dockerfile(const ContainerPlan& c) {
  std::string out;
  out += "FROM " + std::string(kUnitImage) + " AS toskose-unit\n\n";
  out += "FROM " + c.image.base_image + "\n";
  out += "COPY --from=toskose-unit " + std::string(kUnitBinary) + " " + std::string(kUnitBinary) + "\n";
  out += "COPY . " + std::string(kAppsRoot) + "/\n";
  out += "WORKDIR " + std::string(kAppsRoot) + "\n";
  out += "ENTRYPOINT [\"" + std::string(kUnitBinary) + "\", \"--config\", \"" + std::string(kAppsRoot) + "/" +
         std::string(kSupervisorConfig) + "\"]\n";
  return out;
}

std::string manager_dockerfile(const std::string& template_file) {
  const std::string dir(kManagerConfigDir);
  std::string out;
  out += "FROM " + std::string(kManagerImage) + "\n";
  out += "COPY " + template_file + " toskose.yml " + dir + "/\n";
  out += "ENV TOSKOSE_TEMPLATE=" + dir + "/" + template_file + " TOSKOSE_CONFIG=" + dir + "/toskose.yml\n";
  return out;
}

}  // namespace

std::string script_path(std::string_view component, std::string_view csar_path) {
  return std::string(component) + "/" + basename_of(csar_path);
}

std::string artifact_path(std::string_view component, std::string_view csar_path) {
  return std::string(component) + "/artifacts/" + basename_of(csar_path);
}

std::string generate_supervisor_config(const EnrichedModel& m, const std::string& container) {
  const auto& plan = hosting_plan(m, container);
  std::string out;
  out += "; unit configuration for container " + plan.name + "\n";
  out += "[inet_http_server]\n";
  out += "port=*:${SUPERVISORD_PORT}\n";
  out += "username=${SUPERVISORD_USER}\n";
  out += "password=${SUPERVISORD_PASSWORD}\n\n";
  out += "[supervisord]\n";
  out += "logfile=%(here)s/logs/supervisord.log\n";
  out += "loglevel=${SUPERVISORD_LOG_LEVEL}\n";
  out += "childlogdir=%(here)s/logs\n";
  out += "nodaemon=true\n\n";
  out += "[rpcinterface:supervisor]\n";
  out += "supervisor.rpcinterface_factory=supervisor.rpcinterface:make_main_rpcinterface\n";

  for (const auto& comp : plan.components) {
    const auto& node = *m.templ.find(comp);
    std::string env;
    for (const auto& [k, v] : component_inputs(node)) env += (env.empty() ? "" : ",") + k + "=" + dquoted(v);
    for (const auto& op : node.interface.operations) {
      const auto script = script_path(comp, op.implementation.path);
      out += "\n[program:" + program_name(comp, op.name) + "]\n";
      out += "command=/bin/sh \"%(here)s/" + escaped(script) + "\"\n";
      out += "directory=%(here)s/" + literal(comp) + "\n";
      if (!env.empty()) out += "environment=" + env + "\n";
      out += "autostart=false\n";
      out += "autorestart=false\n";
      out += "startsecs=1\n";
      out += "stopwaitsecs=10\n";
      out += "exitcodes=0\n";
    }
  }
  return out;
}

std::vector<BuildContext> generate_contexts(const EnrichedModel& m, const tosca::CsarArchive& csar) {
  std::vector<BuildContext> out;
  for (const auto& plan : m.containers) {
    if (plan.role != ContainerRole::hosting) continue;
    BuildContext ctx;
    ctx.container = plan.name;
    ctx.kind = ContextKind::unit;
    add_file(ctx, std::string(kSupervisorConfig), FileSource{generate_supervisor_config(m, plan.name), {}, false});
    for (const auto& comp : plan.components) {
      const auto& node = *m.templ.find(comp);
      for (const auto& op : node.interface.operations) {
        const auto rel = script_path(comp, op.implementation.path);
        if (ctx.files.contains(rel)) continue;  // one script serving several operations
        auto src = from_csar(csar, comp, op.implementation.path);
        src.executable = true;
        add_file(ctx, rel, std::move(src));
      }
      for (const auto& a : node.artifacts) {
        if (a.is_image()) continue;
        add_file(ctx, artifact_path(comp, a.path), from_csar(csar, comp, a.path));
      }
    }
    ctx.dockerfile = unit_dockerfile(plan);
    out.push_back(std::move(ctx));
  }

  BuildContext mgr;
  mgr.container = m.manager().name;
  mgr.kind = ContextKind::manager;
  const auto template_file = basename_of(csar.entry_definitions());
  add_file(mgr, template_file, FileSource{csar.read_entry_definitions(), {}, false});
  add_file(mgr, "toskose.yml", FileSource{config::serialize_config(m.config), {}, false});
  mgr.dockerfile = manager_dockerfile(template_file);
  out.push_back(std::move(mgr));
  return out;
}

void materialize(const BuildContext& ctx, const stdfs::path& dir) {
  stdfs::create_directories(dir);
  for (const auto& [rel, src] : ctx.files) {
    const auto target = dir / rel;
    stdfs::create_directories(target.parent_path());
    fs::write_file(target, src.from.empty() ? src.content : fs::read_file(src.from));
    ::chmod(target.c_str(), src.executable ? 0755 : 0644);
  }
  fs::write_file(dir / "Dockerfile", ctx.dockerfile);
}

}  // namespace toskose::packager
