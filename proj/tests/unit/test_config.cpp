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

#include <doctest.h>

#include <random>

#include "support.hpp"
#include "toskose/common/error.hpp"
#include "toskose/config/toskose_config.hpp"
#include "toskose/tosca/parser.hpp"

using namespace toskose;
using namespace toskose::config;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::io_error;
}

tosca::ServiceTemplate thinking() {
  return tosca::parse_service_template(testing::thinking_template());
}

std::string thinking_config() { return fs::read_file(testing::fixtures() / "thinking" / "toskose.yml"); }

// Randomly unset fields of a complete config.
ToskoseConfig knock_out(ToskoseConfig c, std::mt19937& rng) {
  auto coin = [&] { return rng() % 2 == 0; };
  auto maybe = [&](auto& field) {
    if (coin()) field.reset();
  };
  for (auto it = c.nodes.begin(); it != c.nodes.end();) {
    if (rng() % 5 == 0) {
      it = c.nodes.erase(it);
      continue;
    }
    auto& n = it->second;
    maybe(n.alias), maybe(n.port), maybe(n.user), maybe(n.password), maybe(n.log_level);
    maybe(n.docker.name), maybe(n.docker.tag), maybe(n.docker.registry_password);
    ++it;
  }
  if (rng() % 5 == 0) {
    c.manager.reset();
  } else {
    auto& m = *c.manager;
    maybe(m.alias), maybe(m.port), maybe(m.user), maybe(m.password), maybe(m.mode);
    maybe(m.secret_key), maybe(m.docker.name), maybe(m.docker.tag), maybe(m.docker.registry_password);
  }
  return c;
}

template <typename T>
void check_kept(const std::optional<T>& given, const std::optional<T>& completed) {
  if (given) CHECK(completed == given);
  else CHECK(completed.has_value());
}

}  // namespace

TEST_CASE("parse the hand-written Thinking configuration") {
  auto c = parse_config(thinking_config());
  CHECK(c.nodes.at("maven").port == 9456);
  CHECK(c.nodes.at("maven").user == "user_21ty5");
  CHECK(c.nodes.at("maven").docker.tag == "0.1.3");
  CHECK(c.nodes.at("node").alias == "node");
  CHECK(c.nodes.at("node").log_level == "DEBUG");
  REQUIRE(c.manager.has_value());
  CHECK(c.manager->port == 12000);
  CHECK(c.manager->secret_key == "my_secret");
  CHECK_FALSE(c.manager->docker.registry_password.has_value());
}

TEST_CASE("parse edge cases") {
  CHECK(parse_config("") == ToskoseConfig{});
  CHECK(parse_config("# only a comment\n") == ToskoseConfig{});
  CHECK(code_of([] { parse_config("nodes:\n  maven:\n    port: abc\n"); }) == Errc::type_mismatch);
  CHECK(code_of([] { parse_config("nodes:\n  maven:\n    port: 90.5\n"); }) == Errc::type_mismatch);
  CHECK(code_of([] { parse_config("nodes:\n  maven:\n    colour: red\n"); }) == Errc::unknown_key);
  CHECK(code_of([] { parse_config("extra: {}\n"); }) == Errc::unknown_key);
  CHECK(code_of([] { parse_config("manager:\n  docker:\n    digest: x\n"); }) == Errc::unknown_key);
  CHECK(code_of([] { parse_config("nodes: [a, b]\n"); }) == Errc::type_mismatch);
  CHECK(code_of([] { parse_config("nodes: {a: [\n"); }) == Errc::syntax_error);
  auto c = parse_config("nodes:\n  maven:\n    docker:\n      registry_password: ''\n");
  CHECK_FALSE(c.nodes.at("maven").docker.registry_password.has_value());
}

TEST_CASE("validation") {
  const auto t = thinking();
  SUBCASE("hand-written config is clean") {
    auto report = validate_config(parse_config(thinking_config()), t);
    CHECK(report.clean());
    CHECK(report.has("cleartext-password"));
  }
  SUBCASE("standalone and unknown containers") {
    auto report = validate_config(parse_config("nodes:\n  mongodb:\n    port: 9001\n  ghost: {}\n"), t);
    CHECK(report.has("config-for-standalone"));
    CHECK(report.has("config-for-unknown"));
  }
  SUBCASE("field rules") {
    auto report = validate_config(
        parse_config("nodes:\n  maven: {port: 70000, alias: 'not ok', log_level: LOUD, user: ''}\n"
                     "manager: {port: 0, mode: chaos, docker: {name: ''}}\n"),
        t);
    for (auto code : {"port-range", "alias-invalid", "log-level", "credentials-empty",
                      "manager-mode", "image-name"}) {
      CHECK_MESSAGE(report.has(code), code);
    }
    CHECK(report.count("port-range") == 2);
  }
  SUBCASE("alias clash") {
    auto report = validate_config(parse_config("nodes:\n  maven: {alias: node}\n  node: {}\n"), t);
    CHECK(report.has("alias-clash"));
    report = validate_config(parse_config("nodes:\n  maven: {alias: toskose-manager}\n"), t);
    CHECK(report.has("alias-clash"));
  }
  SUBCASE("completed stage requires every block") {
    auto report = validate_config(ToskoseConfig{}, t, ConfigStage::completed);
    CHECK(report.has("manager-missing"));
    CHECK(report.count("node-config-missing") == 2);
    CHECK(validate_config(complete_config({}, t), t, ConfigStage::completed).clean());
  }
  SUBCASE("development mode suppresses the clear-text warning") {
    auto report = validate_config(parse_config("manager: {mode: development, password: x}\n"), t);
    CHECK(report.empty());
  }
  SUBCASE("reserved manager name") {
    auto t2 = t;
    t2.find("mongodb")->name = "toskose-manager";
    CHECK(validate_config({}, t2).has("reserved-name"));
  }
}

TEST_CASE("completion of an empty config yields the documented defaults") {
  const auto t = thinking();
  auto c = complete_config({}, t, {"giulen"});
  const auto golden = fs::read_file(testing::goldens() / "thinking" / "toskose-defaults.yml");
  CHECK(c == parse_config(golden));
  CHECK(serialize_config(c) == golden);

  const auto& maven = node_config(c, "maven");
  CHECK(maven.alias == "maven");
  CHECK(maven.port == 9001);
  CHECK(maven.user == "admin");
  CHECK(maven.password == "admin");
  CHECK(maven.log_level == "INFO");
  const auto& m = manager_config(c);
  CHECK(m.port == 10000);
  CHECK(m.mode == "production");
  CHECK(m.secret_key == "secret");
  CHECK_FALSE(c.nodes.contains("mongodb"));

  CHECK(complete_config({}, t).nodes.at("node").docker.name == "thinking-node-toskosed");
}

TEST_CASE("completion keeps every provided value") {
  const auto t = thinking();
  const auto given = parse_config(thinking_config());
  const auto c = complete_config(given, t, {"someone"});
  CHECK(c.nodes.at("maven").alias == given.nodes.at("maven").alias);
  CHECK(c.nodes.at("maven").port == 9456);
  CHECK(c.nodes.at("node").password == "p4ssw0rd");
  CHECK(c.nodes.at("node").docker.name == "giulen/thinking-node-toskosed");
  CHECK(c.manager->secret_key == "my_secret");
  // The hand-written file sets every field already.
  CHECK(c == given);
}

TEST_CASE("random partial configs: values kept, completion idempotent") {
  const auto t = thinking();
  const auto full = parse_config(thinking_config());
  std::mt19937 rng(11);
  for (int round = 0; round < 300; ++round) {
    auto partial = knock_out(full, rng);
    if (round % 3 == 0) partial.nodes["maven"].docker.registry_password = "pw";
    auto done = complete_config(partial, t, {"repo"});
    CAPTURE(serialize_config(partial));
    for (const auto& [name, n] : partial.nodes) {
      const auto& d = done.nodes.at(name);
      check_kept(n.alias, d.alias);
      check_kept(n.port, d.port);
      check_kept(n.user, d.user);
      check_kept(n.password, d.password);
      check_kept(n.log_level, d.log_level);
      check_kept(n.docker.name, d.docker.name);
      check_kept(n.docker.tag, d.docker.tag);
      CHECK(d.docker.registry_password == n.docker.registry_password);
    }
    if (partial.manager) {
      const auto& p = *partial.manager;
      const auto& d = *done.manager;
      check_kept(p.alias, d.alias);
      check_kept(p.port, d.port);
      check_kept(p.mode, d.mode);
      check_kept(p.secret_key, d.secret_key);
      check_kept(p.docker.name, d.docker.name);
    }
    CHECK(done.nodes.size() == 2);
    CHECK(complete_config(done, t, {"repo"}) == done);
    CHECK(validate_config(done, t, ConfigStage::completed).clean());
    CHECK(parse_config(serialize_config(done)) == done);
    CHECK(parse_config(serialize_config(partial)) == partial);
  }
}
