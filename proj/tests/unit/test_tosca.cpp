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

#include <algorithm>
#include <functional>
#include <random>

#include "support.hpp"
#include "toskose/common/error.hpp"
#include "toskose/tosca/csar.hpp"
#include "toskose/tosca/parser.hpp"
#include "toskose/tosca/topology.hpp"

using namespace toskose;
using namespace toskose::tosca;

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

std::filesystem::path write_archive(const std::filesystem::path& dir, const std::string& name,
                                    const std::vector<zip::Entry>& entries) {
  auto p = dir / name;
  fs::write_file(p, zip::write(entries));
  return p;
}

NodeTemplate make_node(std::string name, NodeKind kind) {
  NodeTemplate n;
  n.name = std::move(name);
  n.kind = kind;
  switch (kind) {
    case NodeKind::container: n.type_name = std::string(kContainerType); break;
    case NodeKind::software: n.type_name = std::string(kSoftwareType); break;
    case NodeKind::volume: n.type_name = std::string(kVolumeType); break;
  }
  return n;
}

RelationshipInstance rel(RelKind kind, std::string s, std::string d, std::string loc = {}) {
  return {kind, std::move(s), std::move(d), std::move(loc)};
}

ServiceTemplate thinking() { return parse_service_template(testing::thinking_template()); }

}  // namespace

TEST_SUITE("csar") {
  TEST_CASE("reads the Thinking archive") {
    fs::TempDir tmp;
    auto path = testing::pack_thinking(tmp.path(), "thinking-v2.csar");
    auto csar = read_csar(path, tmp.path());
    CHECK(csar.entry_definitions() == "thinking.yaml");
    CHECK(csar.metadata().at("CSAR-Version") == "1.1");
    CHECK(csar.read_entry_definitions() == testing::thinking_template());
    CHECK_FALSE(csar.resolve("api/install.sh").empty());
    CHECK(csar.resolve("api/nope.sh").empty());
    CHECK(csar.resolve("../etc/passwd").empty());
  }

  TEST_CASE("the committed archive matches the fixture tree") {
    fs::TempDir tmp;
    auto csar = read_csar(testing::fixtures() / "thinking" / "thinking-v2.csar", tmp.path());
    CHECK(fs::list_files(csar.root()) == fs::list_files(testing::thinking_tree()));
  }

  TEST_CASE("scratch space is removed with the archive") {
    fs::TempDir tmp;
    auto path = testing::pack_thinking(tmp.path());
    std::filesystem::path root;
    {
      auto csar = read_csar(path, tmp.path());
      root = csar.root();
      CHECK(std::filesystem::exists(root));
    }
    CHECK_FALSE(std::filesystem::exists(root));
  }

  TEST_CASE("layout errors") {
    fs::TempDir tmp;
    auto tar = testing::pack_thinking(tmp.path(), "app.tar");
    CHECK(code_of([&] { read_csar(tar, tmp.path()); }) == Errc::bad_extension);

    auto zip_ok = testing::pack_thinking(tmp.path(), "app.ZIP");
    CHECK(read_csar(zip_ok, tmp.path()).entry_definitions() == "thinking.yaml");

    auto no_meta = write_archive(tmp.path(), "a.csar", {{"t.yaml", "x: 1"}});
    CHECK(code_of([&] { read_csar(no_meta, tmp.path()); }) == Errc::missing_metadata);

    // Hand-built: metadata directory present but empty.
    auto empty_meta = write_archive(tmp.path(), "b.csar", {{"TOSCA-Metadata/", ""}, {"t.yaml", "x: 1"}});
    CHECK(code_of([&] { read_csar(empty_meta, tmp.path()); }) == Errc::missing_entry_definitions);

    auto no_key = write_archive(tmp.path(), "c.csar", {{"TOSCA-Metadata/TOSCA.meta", "CSAR-Version: 1.1\n"}});
    CHECK(code_of([&] { read_csar(no_key, tmp.path()); }) == Errc::missing_entry_definitions);

    auto dangling = write_archive(tmp.path(), "d.csar",
                                  {{"TOSCA-Metadata/TOSCA.meta", "Entry-Definitions: missing.yaml\n"}});
    CHECK(code_of([&] { read_csar(dangling, tmp.path()); }) == Errc::missing_entry_definitions);

    auto garbage = tmp.path() / "e.csar";
    fs::write_file(garbage, "PK but not really");
    CHECK(code_of([&] { read_csar(garbage, tmp.path()); }) == Errc::corrupt_archive);

    // Nothing left behind in the scratch parent but the archives themselves.
    for (const auto& e : std::filesystem::directory_iterator(tmp.path())) {
      CHECK(e.is_regular_file());
    }
  }

  TEST_CASE("metadata lines") {
    auto m = parse_metadata("A: 1\r\nEntry-Definitions:  defs/main.yaml \n\nnocolon\n");
    CHECK(m.at("A") == "1");
    CHECK(m.at("Entry-Definitions") == "defs/main.yaml");
    CHECK(m.size() == 2);
  }

  TEST_CASE("artifacts must exist inside the archive") {
    fs::TempDir tmp;
    auto csar = read_csar(testing::pack_thinking(tmp.path()), tmp.path());
    auto t = thinking();
    CHECK(validate_artifacts(t, csar).empty());

    t.find("api")->interface.operations[0].implementation.path = "api/missing.sh";
    t.find("gui")->artifacts.push_back({"bad", "../outside.txt", "tosca.artifacts.File"});
    auto report = validate_artifacts(t, csar);
    CHECK(report.count("missing-artifact") == 1);
    CHECK(report.count("artifact-path") == 1);
  }
}

TEST_SUITE("parser") {
  TEST_CASE("Thinking node kinds") {
    auto t = thinking();
    CHECK(t.name == "thinking");
    const std::map<std::string, NodeKind> want{
        {"mongodb", NodeKind::container}, {"maven", NodeKind::container},
        {"node", NodeKind::container},     {"dbvolume", NodeKind::volume},
        {"api", NodeKind::software},       {"gui", NodeKind::software},
        {"logsniffer", NodeKind::software}};
    REQUIRE(t.nodes.size() == want.size());
    for (const auto& n : t.nodes) CHECK(want.at(n.name) == n.kind);
    CHECK(t.find("api")->type_name == "thinking.nodes.Api");
  }

  TEST_CASE("Thinking relationships and operations") {
    auto t = thinking();
    const std::vector<RelationshipInstance> want{
        rel(RelKind::hosted_on, "api", "maven"),
        rel(RelKind::connects_to, "api", "mongodb"),
        rel(RelKind::hosted_on, "gui", "node"),
        rel(RelKind::depends_on, "gui", "api"),
        rel(RelKind::hosted_on, "logsniffer", "maven"),
        rel(RelKind::attaches_to, "mongodb", "dbvolume", "/data/db"),
    };
    CHECK(t.relationships == want);

    const auto* api = t.find("api");
    CHECK(api->interface.names() ==
          std::vector<std::string>{"create", "configure", "push_default", "start", "stop", "delete"});
    CHECK(api->interface.find("configure")->inputs.dump() ==
          R"({"dburl":"mongodb","dbport":"27017","dbname":"thoughtsSharing","collectionname":"thoughts"})");
    CHECK(api->interface.find("stop")->implementation.path == "api/stop.sh");
    CHECK(t.allowed_operations(*api).back() == "push_default");
    CHECK(t.find("logsniffer")->interface.names() ==
          std::vector<std::string>{"create", "start", "stop", "delete"});

    const auto* image = t.find("mongodb")->image();
    REQUIRE(image != nullptr);
    CHECK(image->path == "mongo:3.4");
    CHECK(t.find("maven")->properties["ports"].dump() == R"({"8080":"8000"})");
  }

  TEST_CASE("empty templates are valid") {
    auto t = parse_service_template("tosca_definitions_version: tosca_simple_yaml_1_0\n"
                                    "topology_template:\n  node_templates: {}\n");
    CHECK(t.nodes.empty());
    CHECK(validate_topology(t).empty());
    CHECK(parse_service_template("").nodes.empty());
  }

  TEST_CASE("structural errors") {
    const std::string head =
        "topology_template:\n  node_templates:\n"
        "    c: {type: tosker.nodes.Container}\n"
        "    v: {type: tosker.nodes.Volume}\n";
    CHECK(code_of([&] { parse_service_template(head + "    s: {type: tosker.nodes.Software, requirements: [host: v]}\n"); }) ==
          Errc::invalid_relationship);
    CHECK(code_of([&] { parse_service_template(head + "    s: {type: tosker.nodes.Software, requirements: [host: nowhere]}\n"); }) ==
          Errc::unresolved_target);
    CHECK(code_of([&] { parse_service_template(head + "    s: {type: acme.Thing}\n"); }) ==
          Errc::unknown_node_type);
    CHECK(code_of([&] { parse_service_template("a: [1, 2\n"); }) == Errc::syntax_error);
  }

  TEST_CASE("type resolution follows derived_from and suffixes") {
    const std::vector<NodeType> declared{{"a.B", "a.C", {}}, {"a.C", "tosker.nodes.Software", {}},
                                         {"loop.X", "loop.Y", {}}, {"loop.Y", "loop.X", {}}};
    CHECK(resolve_kind("a.B", declared) == NodeKind::software);
    CHECK(resolve_kind("vendor.tosker.nodes.Volume", declared) == NodeKind::volume);
    CHECK_FALSE(resolve_kind("tosker.nodes.Containers", declared).has_value());
    CHECK_FALSE(resolve_kind("loop.X", declared).has_value());
    CHECK_FALSE(resolve_kind("nope", declared).has_value());
  }

  TEST_CASE("get_input resolves against topology inputs") {
    auto t = parse_service_template(
        "topology_template:\n"
        "  inputs:\n    branch: {type: string, default: main}\n"
        "  node_templates:\n"
        "    c: {type: tosker.nodes.Container}\n"
        "    s:\n      type: tosker.nodes.Software\n      requirements: [host: c]\n"
        "      interfaces:\n        Standard:\n          create:\n"
        "            implementation: s/create.sh\n            inputs: {branch: {get_input: branch}}\n");
    CHECK(t.find("s")->interface.find("create")->inputs["branch"] == "main");
  }

  TEST_CASE("serialize then parse is a fixpoint") {
    auto t = thinking();
    auto once = parse_service_template(serialize_service_template(t));
    CHECK(once == t);
    CHECK(serialize_service_template(once) == serialize_service_template(t));
  }
}

TEST_SUITE("topology") {
  TEST_CASE("Thinking is clean") { CHECK(validate_topology(thinking()).empty()); }

  TEST_CASE("software without host") {
    auto t = parse_service_template(
        "topology_template:\n  node_templates:\n    s: {type: tosker.nodes.Software}\n");
    auto report = validate_topology(t);
    REQUIRE(report.items().size() == 1);
    CHECK(report.items()[0].code == "software-without-host");
    CHECK(report.items()[0].node == "s");
  }

  TEST_CASE("container properties and volume edges") {
    auto t = thinking();
    t.find("maven")->properties["cpu"] = "2";
    t.relationships.push_back(rel(RelKind::depends_on, "dbvolume", "maven"));
    t.relationships.push_back(rel(RelKind::attaches_to, "node", "dbvolume"));
    auto report = validate_topology(t);
    CHECK(report.has("container-property"));
    CHECK(report.has("volume-outgoing-relationship"));
    CHECK(report.has("invalid-relationship"));
    CHECK(report.has("attach-missing-location"));
  }

  // Oracle: boolean transitive closure over every subset of the six possible
  // HostedOn edges between three software nodes.
  TEST_CASE("host cycles agree with brute force over all edge subsets") {
    const std::vector<std::string> names{"a", "b", "c"};
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) edges.emplace_back(i, j);
    REQUIRE(edges.size() == 6);

    for (unsigned mask = 0; mask < 64; ++mask) {
      ServiceTemplate t;
      t.nodes.push_back(make_node("k", NodeKind::container));
      for (const auto& n : names) t.nodes.push_back(make_node(n, NodeKind::software));
      bool reach[3][3] = {};
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (mask & (1u << e)) {
          auto [i, j] = edges[e];
          t.relationships.push_back(rel(RelKind::hosted_on, names[i], names[j]));
          reach[i][j] = true;
        }
      }
      for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) reach[i][j] = reach[i][j] || (reach[i][k] && reach[k][j]);
      const bool cyclic = reach[0][0] || reach[1][1] || reach[2][2];
      CAPTURE(mask);
      CHECK(validate_topology(t).has("host-cycle") == cyclic);
    }
  }

  TEST_CASE("validation is monotone under violating additions") {
    const std::vector<RelationshipInstance> violations{
        rel(RelKind::hosted_on, "api", "node"),           // second host
        rel(RelKind::hosted_on, "maven", "node"),         // container hosted
        rel(RelKind::hosted_on, "api", "dbvolume"),       // volume host
        rel(RelKind::connects_to, "dbvolume", "api"),     // volume source
        rel(RelKind::attaches_to, "api", "dbvolume", "/x"),
        rel(RelKind::attaches_to, "node", "dbvolume"),    // no location
        rel(RelKind::depends_on, "gui", "ghost"),
        rel(RelKind::hosted_on, "maven", "api"),
    };
    for (std::size_t mask = 1; mask < (1u << violations.size()); mask += 7) {
      auto t = thinking();
      for (std::size_t i = 0; i < violations.size(); ++i) {
        if (mask & (1u << i)) t.relationships.push_back(violations[i]);
      }
      CAPTURE(mask);
      CHECK_FALSE(validate_topology(t).clean());
    }
  }
}

TEST_SUITE("classification") {
  TEST_CASE("Thinking") {
    auto c = classify_nodes(thinking());
    CHECK(c.hosting == std::map<std::string, std::vector<std::string>>{
                           {"maven", {"api", "logsniffer"}}, {"node", {"gui"}}});
    CHECK(c.standalone == std::set<std::string>{"mongodb"});
    CHECK(c.host_container.at("gui") == "node");
  }

  TEST_CASE("only containers") {
    ServiceTemplate t;
    t.nodes = {make_node("x", NodeKind::container), make_node("y", NodeKind::container)};
    auto c = classify_nodes(t);
    CHECK(c.hosting.empty());
    CHECK(c.standalone == std::set<std::string>{"x", "y"});
  }

  TEST_CASE("chains order by depth then name") {
    ServiceTemplate t;
    t.nodes = {make_node("sw2", NodeKind::software), make_node("c1", NodeKind::container),
               make_node("sw1", NodeKind::software)};
    t.relationships = {rel(RelKind::hosted_on, "sw2", "sw1"), rel(RelKind::hosted_on, "sw1", "c1")};
    REQUIRE(validate_topology(t).clean());
    CHECK(classify_nodes(t).hosting.at("c1") == std::vector<std::string>{"sw1", "sw2"});
  }

  // Oracle: enumerate every HostedOn path from each software node and keep
  // the one ending at a container; compare partition and ordering.
  TEST_CASE("random forests match exhaustive path enumeration") {
    std::mt19937 rng(2024);
    for (int round = 0; round < 200; ++round) {
      ServiceTemplate t;
      const int containers = 1 + static_cast<int>(rng() % 3);
      const int software = static_cast<int>(rng() % 7);
      for (int i = 0; i < containers; ++i) t.nodes.push_back(make_node("c" + std::to_string(i), NodeKind::container));
      for (int i = 0; i < software; ++i) {
        const auto name = "s" + std::to_string(i);
        t.nodes.push_back(make_node(name, NodeKind::software));
        const int pick = static_cast<int>(rng() % (containers + i));
        const auto host = pick < containers ? "c" + std::to_string(pick) : "s" + std::to_string(pick - containers);
        t.relationships.push_back(rel(RelKind::hosted_on, name, host));
      }
      std::shuffle(t.nodes.begin(), t.nodes.end(), rng);
      REQUIRE(validate_topology(t).clean());

      std::map<std::string, std::vector<std::pair<int, std::string>>> expected;
      std::function<void(const std::string&, const std::string&, int)> walk =
          [&](const std::string& origin, const std::string& at, int depth) {
            const auto* node = t.find(at);
            if (node->kind == NodeKind::container) {
              if (depth > 0) expected[at].emplace_back(depth, origin);
              return;
            }
            for (const auto& r : t.relationships) {
              if (r.kind == RelKind::hosted_on && r.source == at) walk(origin, r.target, depth + 1);
            }
          };
      for (const auto& n : t.nodes) {
        if (n.kind == NodeKind::software) walk(n.name, n.name, 0);
      }

      auto got = classify_nodes(t);
      std::set<std::string> all_containers, seen_software;
      for (const auto& n : t.nodes) {
        if (n.kind == NodeKind::container) all_containers.insert(n.name);
      }
      for (auto& [c, items] : expected) {
        std::sort(items.begin(), items.end());
        std::vector<std::string> names;
        for (const auto& [_, s] : items) names.push_back(s);
        CHECK(got.hosting.at(c) == names);
      }
      CHECK(got.hosting.size() == expected.size());
      for (const auto& [c, list] : got.hosting) {
        CHECK_FALSE(got.standalone.contains(c));
        all_containers.erase(c);
        for (const auto& s : list) CHECK(seen_software.insert(s).second);
      }
      CHECK(all_containers == got.standalone);
      CHECK(static_cast<int>(seen_software.size()) == software);
    }
  }
}
