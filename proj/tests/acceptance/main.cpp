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

// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 when
// any fails.

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <functional>
#include <iostream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <yaml-cpp/yaml.h>

#include "harness_fixture.hpp"
#include "proc_scan.hpp"
#include "toskose/common/error.hpp"
#include "toskose/packager/artifacts.hpp"
#include "toskose/tosca/parser.hpp"
#include "toskose/unit/rpc_server.hpp"
#include "unit_fixture.hpp"
#include "yaml_compare.hpp"

using namespace toskose;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fixed(double v) {
  std::ostringstream s;
  s.precision(2);
  s << std::fixed << v;
  return s.str();
}

// ---------------------------------------------------------------------------

Outcome compose_fidelity() {
  Outcome o;
  const auto t0 = Clock::now();
  testing::ThinkingArtifacts art;
  const double elapsed = seconds_since(t0);
  o.expect(art.result.ok, "pipeline failed: " + art.result.message);
  if (!art.result.ok) return o;

  const auto written = fs::read_file(art.out / packager::kComposeFile);
  const auto golden = fs::read_file(testing::goldens() / "thinking" / "docker-compose.yml");
  o.expect(testing::normalized_yaml(written) == testing::normalized_yaml(golden), "differs from the golden file");

  const auto doc = YAML::Load(written);
  const auto services = doc["services"];
  std::set<std::string> names;
  for (const auto& s : services) names.insert(s.first.as<std::string>());
  o.expect(names == std::set<std::string>{"maven", "node", "mongodb", "toskose-manager"}, "service set");

  const auto mongodb = services["mongodb"];
  o.expect(mongodb["image"].as<std::string>() == "mongo:3.4", "mongodb image");
  o.expect(mongodb["volumes"].size() == 1 && mongodb["volumes"][0].as<std::string>() == "dbvolume:/data/db",
           "mongodb volumes");

  auto env_of = [](const YAML::Node& s) {
    std::map<std::string, std::string> env;
    for (const auto& e : s["environment"]) {
      const auto kv = e.as<std::string>();
      env[kv.substr(0, kv.find('='))] = kv.substr(kv.find('=') + 1);
    }
    return env;
  };
  const std::map<std::string, std::map<std::string, std::string>> units = {
      {"maven",
       {{"SUPERVISORD_ALIAS", "maven"}, {"SUPERVISORD_PORT", "9456"}, {"SUPERVISORD_USER", "user_21ty5"},
        {"SUPERVISORD_PASSWORD", "1t5mYp4ss"}, {"SUPERVISORD_LOG_LEVEL", "INFO"}}},
      {"node",
       {{"SUPERVISORD_ALIAS", "node"}, {"SUPERVISORD_PORT", "13450"}, {"SUPERVISORD_USER", "user_a4bc2"},
        {"SUPERVISORD_PASSWORD", "p4ssw0rd"}, {"SUPERVISORD_LOG_LEVEL", "DEBUG"}}}};
  for (const auto& [name, expected] : units) {
    o.expect(services[name]["init"].as<bool>(), name + " init");
    const auto env = env_of(services[name]);
    for (const auto& [k, v] : expected) {
      o.expect(env.contains(k) && env.at(k) == v, name + " " + k);
    }
  }
  const auto manager = services["toskose-manager"];
  const auto menv = env_of(manager);
  o.expect(menv == std::map<std::string, std::string>{{"TOSKOSE_MANAGER_PORT", "12000"},
                                                       {"TOSKOSE_APP_MODE", "production"},
                                                       {"SECRET_KEY", "my_secret"}},
           "manager environment");
  o.expect(manager["ports"].size() == 1 && manager["ports"][0].as<std::string>() == "12000:12000/tcp", "manager ports");
  const auto net = doc["networks"]["toskose-network"];
  o.expect(net["driver"].as<std::string>() == "overlay" && net["attachable"].as<bool>(), "network");
  o.expect(elapsed < 5.0, "took " + fixed(elapsed) + " s");
  o.note(fixed(elapsed) + " s");
  return o;
}

Outcome default_completion() {
  Outcome o;
  testing::ThinkingArtifacts art(std::nullopt);
  o.expect(art.result.ok, "pipeline failed: " + art.result.message);
  if (!art.result.ok) return o;

  const auto& c = art.result.completed;
  o.expect(c.nodes.size() == 2, "node entries");
  for (const auto* name : {"maven", "node"}) {
    const auto& n = config::node_config(c, name);
    o.expect(n.alias == std::string(name) && n.port == 9001 && n.user == "admin" && n.password == "admin" &&
                 n.log_level == "INFO",
             std::string(name) + " defaults");
    o.expect(n.docker.tag == "latest", std::string(name) + " image tag");
  }
  const auto& m = config::manager_config(c);
  o.expect(m.alias == "toskose-manager" && m.port == 10000 && m.mode == "production" && m.secret_key == "secret" &&
               m.user == "admin" && m.password == "admin",
           "manager defaults");
  // The completed document shipped to the manager holds the same values.
  const auto shipped = config::parse_config(fs::read_file(art.out / "toskose-manager" / "toskose.yml"));
  o.expect(shipped == c, "shipped config differs");
  return o;
}

std::string rpc_state(const std::string& address, const std::string& user, const std::string& password,
                      const std::string& program) {
  const auto colon = address.rfind(':');
  xmlrpc::Client client({address.substr(0, colon), std::stoi(address.substr(colon + 1)), user, password});
  return client.call("supervisor.getProcessInfo", xmlrpc::Value::array({program}))["statename"].get<std::string>();
}

Outcome end_to_end() {
  Outcome o;
  testing::ThinkingArtifacts art;
  o.expect(art.result.ok, "pipeline failed: " + art.result.message);
  if (!art.result.ok) return o;

  const auto t0 = Clock::now();
  auto d = harness::launch_local(art.result.compose, art.contexts, art.launch_options());
  const auto manager = harness::resolve_alias(d, "toskose-manager");
  httplib::Client http("127.0.0.1", std::stoi(manager.substr(manager.rfind(':') + 1)));
  http.set_basic_auth("admin_manager", "password_manager");
  http.set_read_timeout(60);

  auto post = [&](const std::string& container, const std::string& component, const std::string& op) {
    auto r = http.Post("/api/v1/node/" + container + "/" + component + "/" + op, httplib::Headers{{"accept", "application/json"}},
                       "", "application/json");
    const bool ok = r && r->status == 200 && json::parse(r->body)["outcome"] == "SUCCESS";
    o.expect(ok, component + "/" + op + " -> " + (r ? std::to_string(r->status) + " " + r->body : "no response"));
  };
  for (const auto* op : {"create", "configure", "push_default", "start"}) post("maven", "api", op);
  for (const auto* op : {"create", "start"}) post("maven", "logsniffer", op);
  for (const auto* op : {"create", "configure", "start"}) post("node", "gui", op);

  const auto maven = harness::resolve_alias(d, "maven");
  post("maven", "api", "stop");
  o.expect(rpc_state(maven, "user_21ty5", "1t5mYp4ss", "api-start") == "STOPPED", "api-start not STOPPED after stop");
  o.expect(rpc_state(maven, "user_21ty5", "1t5mYp4ss", "logsniffer-start") == "RUNNING",
           "logsniffer-start not RUNNING after api stop");
  o.expect(testing::process_alive(d.find("maven")->pid) && testing::process_alive(d.find("node")->pid),
           "a unit process died");
  post("maven", "api", "start");
  o.expect(rpc_state(maven, "user_21ty5", "1t5mYp4ss", "api-start") == "RUNNING", "api-start not RUNNING again");
  const double elapsed = seconds_since(t0);
  harness::teardown(d);
  o.expect(elapsed < 30.0, "took " + fixed(elapsed) + " s");
  o.note(fixed(elapsed) + " s");
  return o;
}

Outcome unit_state_machine() {
  Outcome o;
  using unit::ProcessState;
  static const std::set<std::pair<std::string, std::string>> kEdges = {
      {"STOPPED", "STARTING"}, {"EXITED", "STARTING"},  {"FATAL", "STARTING"},
      {"STARTING", "RUNNING"}, {"STARTING", "EXITED"},  {"STARTING", "FATAL"},
      {"STARTING", "STOPPING"}, {"RUNNING", "STOPPING"}, {"RUNNING", "EXITED"},
      {"STOPPING", "STOPPED"}};

  fs::TempDir dir;
  unit::UnitConfig config;
  config.http = {"127.0.0.1", 0, "admin", "admin"};
  config.supervisor.childlogdir = dir.path() / "logs";
  auto add = [&](const std::string& name, std::vector<std::string> command) {
    unit::ProgramSpec p;
    p.name = name;
    p.command = std::move(command);
    p.directory = dir.path();
    p.startsecs = 0.05;
    p.stopwaitsecs = 2;
    p.stdout_log = dir.path() / "logs" / name / "stdout.log";
    p.stderr_log = dir.path() / "logs" / name / "stderr.log";
    config.programs[name] = p;
  };
  add("oneshot", {"/bin/true"});
  add("service", {"/bin/sleep", "1000"});
  add("failing", {"/bin/sh", "-c", "exit 3"});

  std::mutex mu;
  std::map<std::string, std::string> last;
  std::size_t transitions = 0;
  std::vector<std::string> illegal;
  unit::SupervisorOptions options;
  options.on_transition = [&](const std::string& name, ProcessState from, ProcessState to) {
    std::lock_guard lock(mu);
    ++transitions;
    const std::string f(unit::to_string(from));
    const std::string t(unit::to_string(to));
    const auto prev = last.contains(name) ? last[name] : "STOPPED";
    if (!kEdges.contains({f, t}) || prev != f) illegal.push_back(name + ": " + f + " -> " + t + " after " + prev);
    last[name] = t;
  };
  unit::Supervisor sup(config, options);
  unit::RpcServer server(sup, config.http);
  xmlrpc::Client client({"127.0.0.1", server.start(), "admin", "admin"});

  const std::vector<std::string> names = {"oneshot", "service", "failing"};
  const std::set<int> allowed_faults = {xmlrpc::faults::kAlreadyStarted, xmlrpc::faults::kNotRunning};
  std::mt19937 rng(20190611);
  std::size_t faults = 0;
  std::size_t leftover = 0;
  for (int seq = 0; seq < 1000; ++seq) {
    const int length = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < length; ++i) {
      const auto& name = names[rng() % names.size()];
      const bool wait = rng() % 4 == 0;
      try {
        switch (rng() % 5) {
          case 0:
          case 1: client.call("supervisor.startProcess", xmlrpc::Value::array({name, wait})); break;
          case 2:
          case 3: client.call("supervisor.stopProcess", xmlrpc::Value::array({name, wait})); break;
          default: client.call("supervisor.getAllProcessInfo"); break;
        }
      } catch (const xmlrpc::Fault& f) {
        ++faults;
        if (!allowed_faults.contains(f.code())) o.expect(false, "unexpected fault " + std::to_string(f.code()));
      }
    }
    // Settle: stop whatever runs, then wait for every program to rest.
    for (const auto& name : names) {
      try {
        client.call("supervisor.stopProcess", xmlrpc::Value::array({name, true}));
      } catch (const xmlrpc::Fault&) {
      }
    }
    for (;;) {
      bool busy = false;
      for (const auto& info : client.call("supervisor.getAllProcessInfo")) {
        const auto s = info["statename"].get<std::string>();
        busy |= s == "STARTING" || s == "RUNNING" || s == "STOPPING";
      }
      if (!busy) break;
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    sup.reap();
    leftover += testing::defunct_children();
  }
  server.stop();
  sup.shutdown();

  o.expect(illegal.empty(), std::to_string(illegal.size()) + " illegal transitions" +
                                (illegal.empty() ? "" : ", first " + illegal.front()));
  o.expect(leftover == 0, std::to_string(leftover) + " defunct children after reaping");
  o.note("1000 sequences, " + std::to_string(transitions) + " transitions, " + std::to_string(faults) + " faults");
  return o;
}

Outcome signal_contract() {
  Outcome o;
  fs::TempDir dir;
  constexpr int kGrace = 3;
  std::string conf = "[inet_http_server]\nport=127.0.0.1:0\nusername=admin\npassword=admin\n"
                     "[supervisord]\nlogfile=%(here)s/logs/supervisord.log\n";
  for (const auto* name : {"alpha", "beta"}) {
    testing::write_script(dir.path() / (std::string(name) + ".sh"),
                          "trap 'echo received TERM >> \"$MARKER\"; exit 0' TERM\n"
                          "while :; do sleep 0.05; done\n");
    conf += std::string("[program:") + name + "]\ncommand=%(here)s/" + name + ".sh\nautostart=true\nstartsecs=0.2\n" +
            "stopwaitsecs=" + std::to_string(kGrace) + "\nenvironment=MARKER=\"%(here)s/" + name + ".marker\"\n";
  }
  fs::write_file(dir.path() / "unit.conf", conf);

  const auto binary = (testing::bin_dir() / "toskose-unit").string();
  const auto config_path = (dir.path() / "unit.conf").string();
  const auto output = (dir.path() / "unit.out").string();
  const pid_t pid = fork();
  if (pid == 0) {
    const int fd = open(output.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    dup2(fd, 1);
    dup2(fd, 2);
    execl(binary.c_str(), binary.c_str(), "--config", config_path.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  // Both programs RUNNING: their supervisor log lines say so.
  const auto log = dir.path() / "logs" / "supervisord.log";
  const auto ready_by = Clock::now() + std::chrono::seconds(10);
  for (;;) {
    std::string text;
    if (std::filesystem::exists(log)) text = fs::read_file(log);
    if (text.find("alpha: STARTING -> RUNNING") != std::string::npos &&
        text.find("beta: STARTING -> RUNNING") != std::string::npos) {
      break;
    }
    if (Clock::now() > ready_by) {
      o.expect(false, "programs never reached RUNNING");
      kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
      return o;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }

  const auto t0 = Clock::now();
  kill(pid, SIGTERM);
  int status = 0;
  bool exited = false;
  while (seconds_since(t0) < kGrace + 5) {
    if (waitpid(pid, &status, WNOHANG) == pid) {
      exited = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  const double elapsed = seconds_since(t0);
  if (!exited) {
    kill(pid, SIGKILL);
    waitpid(pid, &status, 0);
  }
  o.expect(exited, "unit still running after grace + 5 s");
  o.expect(exited && WIFEXITED(status) && WEXITSTATUS(status) == 0, "unit exit was not clean");
  for (const auto* name : {"alpha", "beta"}) {
    const auto marker = dir.path() / (std::string(name) + ".marker");
    o.expect(std::filesystem::exists(marker) && fs::read_file(marker).find("received TERM") != std::string::npos,
             std::string(name) + " marker missing");
  }
  o.note("exit after " + fixed(elapsed) + " s");
  return o;
}

bool nothing_written(const std::filesystem::path& out) {
  return !std::filesystem::exists(out) || std::filesystem::is_empty(out);
}

Outcome validation_gates() {
  Outcome o;
  fs::TempDir dir;
  packager::PipelineOptions options;
  options.scratch_parent = dir.path();

  // (a) wrong extension
  const auto tar = testing::pack_thinking(dir.path(), "thinking.tar");
  options.output = dir.path() / "out-a";
  auto r = packager::run_pipeline(tar, std::nullopt, options);
  o.expect(!r.ok && r.error == "BadExtension", "(a) got " + r.error);
  o.expect(nothing_written(options.output), "(a) artifacts written");

  // (b) software without a host
  const auto tree = dir.path() / "tree";
  std::filesystem::copy(testing::thinking_tree(), tree, std::filesystem::copy_options::recursive);
  auto yaml = fs::read_file(tree / "thinking.yaml");
  const std::string host = "        - host: node\n";
  yaml.erase(yaml.find(host), host.size());
  fs::write_file(tree / "thinking.yaml", yaml);
  fs::write_file(dir.path() / "hostless.csar", zip::archive_directory(tree));
  options.output = dir.path() / "out-b";
  r = packager::run_pipeline(dir.path() / "hostless.csar", std::nullopt, options);
  o.expect(!r.ok && r.diagnostics.has("software-without-host"), "(b) not rejected with software-without-host");
  o.expect(nothing_written(options.output), "(b) artifacts written");

  // (c) config entry for a standalone container
  fs::write_file(dir.path() / "standalone.yml", "nodes:\n  mongodb:\n    port: 9001\n");
  options.output = dir.path() / "out-c";
  r = packager::run_pipeline(testing::pack_thinking(dir.path()), dir.path() / "standalone.yml", options);
  o.expect(!r.ok && r.diagnostics.has("config-for-standalone"), "(c) not rejected with config-for-standalone");
  o.expect(nothing_written(options.output), "(c) artifacts written");
  return o;
}

// Random template text plus, as the oracle, each software node's host and
// operations as generated.
struct RandomApp {
  std::string yaml;
  std::vector<std::string> containers;
  std::map<std::string, std::string> host;
  std::map<std::string, std::vector<std::string>> operations;
};

RandomApp random_app(std::mt19937& rng) {
  static const std::vector<std::string> kOps = {"create", "configure", "start", "stop", "delete"};
  RandomApp app;
  std::ostringstream y;
  y << "tosca_definitions_version: tosca_simple_yaml_1_0\n"
       "node_types:\n  rand.Software:\n    derived_from: tosker.nodes.Software\n"
       "    interfaces:\n      Standard:\n        backup:\n          description: extra\n"
       "topology_template:\n  node_templates:\n";
  const int containers = 1 + static_cast<int>(rng() % 3);
  const int software = static_cast<int>(rng() % 6);
  for (int i = 0; i < containers; ++i) {
    const auto name = "box" + std::to_string(i);
    app.containers.push_back(name);
    y << "    " << name << ":\n      type: tosker.nodes.Container\n      artifacts:\n"
      << "        img: { file: \"alpine:3\", type: tosker.artifacts.Image }\n";
  }
  for (int i = 0; i < software; ++i) {
    const auto name = "sw" + std::to_string(i);
    const int pick = static_cast<int>(rng() % (containers + i));
    app.host[name] = pick < containers ? "box" + std::to_string(pick) : "sw" + std::to_string(pick - containers);
    const bool extended = rng() % 2;
    y << "    " << name << ":\n      type: " << (extended ? "rand.Software" : "tosker.nodes.Software")
      << "\n      requirements:\n        - host: " << app.host[name] << "\n";
    std::vector<std::string> ops;
    for (const auto& op : kOps) {
      if (rng() % 2) ops.push_back(op);
    }
    if (extended && rng() % 2) ops.push_back("backup");
    app.operations[name] = ops;
    if (ops.empty()) continue;
    y << "      interfaces:\n        Standard:\n";
    for (const auto& op : ops) {
      y << "          " << op << ":\n            implementation: " << name << "/" << op << ".sh\n"
        << "            inputs: { level: " << rng() % 100 << ", tag: \"t" << rng() % 7 << "\" }\n";
    }
  }
  app.yaml = y.str();
  return app;
}

std::string container_of(const RandomApp& app, std::string node) {
  while (app.host.contains(node)) node = app.host.at(node);
  return node;
}

Outcome round_trip() {
  Outcome o;
  std::size_t configs = 0;
  auto check_model = [&](const packager::EnrichedModel& m,
                         const std::function<std::set<std::string>(const std::string&)>& expected) {
    for (const auto& c : m.containers) {
      if (c.role != packager::ContainerRole::hosting) continue;
      const auto env = c.environment;
      const auto lookup = [env](const std::string& k) -> std::optional<std::string> {
        for (const auto& [name, v] : env) {
          if (name == k) return v;
        }
        return std::nullopt;
      };
      std::set<std::string> got;
      try {
        const auto loaded = unit::load_unit_config(packager::generate_supervisor_config(m, c.name), lookup,
                                                   std::string(packager::kAppsRoot));
        for (const auto& [name, _] : loaded.programs) got.insert(name);
      } catch (const Error& e) {
        o.expect(false, c.name + ": " + e.what());
        continue;
      }
      ++configs;
      const auto want = expected(c.name);
      o.expect(got == want, m.templ.name + "/" + c.name + " program set differs");
    }
  };

  // The Thinking application, with and without a configuration.
  const auto templ = tosca::parse_service_template(testing::thinking_template(), "thinking");
  const std::map<std::string, std::set<std::string>> thinking = {
      {"maven",
       {"api-create", "api-configure", "api-push_default", "api-start", "api-stop", "api-delete", "logsniffer-create",
        "logsniffer-start", "logsniffer-stop", "logsniffer-delete"}},
      {"node", {"gui-create", "gui-configure", "gui-start", "gui-stop", "gui-delete"}}};
  for (const auto& given : {config::ToskoseConfig{},
                            config::parse_config(fs::read_file(testing::fixtures() / "thinking" / "toskose.yml"))}) {
    const auto m = packager::enrich_model(templ, config::complete_config(given, templ));
    check_model(m, [&](const std::string& c) { return thinking.at(c); });
  }

  // Random applications.
  std::mt19937 rng(7);
  for (int round = 0; round < 300; ++round) {
    const auto app = random_app(rng);
    tosca::ServiceTemplate t;
    try {
      t = tosca::parse_service_template(app.yaml, "rand" + std::to_string(round));
    } catch (const Error& e) {
      o.expect(false, "generated template rejected: " + std::string(e.what()));
      continue;
    }
    if (!tosca::validate_topology(t).clean()) {
      o.expect(false, "generated template invalid");
      continue;
    }
    const auto m = packager::enrich_model(t, config::complete_config({}, t));
    check_model(m, [&](const std::string& c) {
      std::set<std::string> want;
      for (const auto& [sw, ops] : app.operations) {
        if (container_of(app, sw) != c) continue;
        for (const auto& op : ops) want.insert(sw + "-" + op);
      }
      return want;
    });
  }
  o.note(std::to_string(configs) + " configurations");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"compose fidelity", compose_fidelity},
      {"default completion", default_completion},
      {"end-to-end lifecycle", end_to_end},
      {"unit state machine", unit_state_machine},
      {"signal contract", signal_contract},
      {"validation gates", validation_gates},
      {"round-trip", round_trip},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r.pass = false;
      r.notes.push_back(std::string("exception: ") + e.what());
    }
    failed += !r.pass;
    std::string detail;
    for (const auto& n : r.notes) detail += (detail.empty() ? "" : "; ") + n;
    std::cout << (r.pass ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : " (" + detail + ")") << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
