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

#include <httplib.h>

#include <cstdio>
#include <mutex>
#include <thread>

#include "support.hpp"
#include "toskose/common/error.hpp"
#include "toskose/common/tar.hpp"
#include "toskose/packager/builder.hpp"

using namespace toskose;
using namespace toskose::packager;

namespace {

std::string run(const std::string& cmd) {
  std::string out;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  REQUIRE(::pclose(p) == 0);
  return out;
}

struct FakeEngine {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::mutex mu;
  std::vector<std::string> requests;
  std::string last_tar;
  std::string auth;
  bool fail_build = false;

  FakeEngine() {
    server.Post("/build", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu);
      requests.push_back("build " + req.get_param_value("t"));
      last_tar = req.body;
      res.set_content(fail_build ? "{\"stream\":\"Step 1\"}\n{\"error\":\"boom\"}\n" : "{\"stream\":\"ok\"}\n",
                      "application/json");
    });
    server.Post(R"(/images/(.+)/push)", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu);
      requests.push_back("push " + std::string(req.matches[1]) + ":" + req.get_param_value("tag"));
      auth = req.get_header_value("X-Registry-Auth");
      res.set_content("{\"status\":\"pushed\"}\n", "application/json");
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~FakeEngine() {
    server.stop();
    thread.join();
  }
};

}  // namespace

TEST_CASE("tar archives are readable by python") {
  fs::TempDir dir;
  fs::write_file(dir.path() / "a.txt", "alpha");
  std::filesystem::create_directories(dir.path() / "deep" / std::string(90, 'd'));
  fs::write_file(dir.path() / "deep" / std::string(90, 'd') / "long-name-file.sh", "#!/bin/sh\n");
  ::chmod((dir.path() / "deep" / std::string(90, 'd') / "long-name-file.sh").c_str(), 0755);
  fs::write_file(dir.path() / "empty", "");
  fs::write_file(dir.path() / "out.tar.bin", "");
  const auto tar = tar::archive_directory(dir.path());
  CHECK(tar.size() % 512 == 0);
  fs::TempDir out;
  fs::write_file(out.path() / "x.tar", tar);
  const auto listing = run("python3 -c \"import tarfile,sys; t=tarfile.open(sys.argv[1]); "
                           "print('\\n'.join('%s %o %d' % (m.name, m.mode, m.size) for m in t.getmembers()))\" " +
                           (out.path() / "x.tar").string());
  CHECK(listing.find("a.txt 644 5\n") != std::string::npos);
  CHECK(listing.find("deep/" + std::string(90, 'd') + "/long-name-file.sh 755 10\n") != std::string::npos);
  CHECK(listing.find("empty 644 0\n") != std::string::npos);
}

TEST_CASE("engine builder issues build and push requests") {
  FakeEngine engine;
  fs::TempDir dir;
  BuildContext ctx;
  ctx.container = "maven";
  ctx.files["supervisord.conf"] = FileSource{"[supervisord]\n", {}, false};
  ctx.dockerfile = "FROM scratch\n";
  materialize(ctx, dir.path());
  ImagePlan plan{"maven:3", "giulen/thinking-maven-toskosed:0.1.3", true, "pw"};

  EngineBuilder b("http://127.0.0.1:" + std::to_string(engine.port));
  CHECK(b.build(ctx, dir.path(), plan) == plan.target_image);
  b.push(plan);
  {
    std::lock_guard lock(engine.mu);
    CHECK(engine.requests == std::vector<std::string>{"build giulen/thinking-maven-toskosed:0.1.3",
                                                      "push giulen/thinking-maven-toskosed:0.1.3"});
    CHECK(engine.last_tar.find("Dockerfile") != std::string::npos);
    CHECK(engine.auth == httplib::detail::base64_encode(R"({"password":"pw","username":"giulen"})"));
  }

  engine.fail_build = true;
  try {
    b.build(ctx, dir.path(), plan);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::build_failed);
  }
}

TEST_CASE("unreachable engine") {
  // A port that was free a moment ago and has no listener now.
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  REQUIRE(::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  const int port = ntohs(addr.sin_port);
  EngineBuilder b("http://127.0.0.1:" + std::to_string(port));
  fs::TempDir dir;
  BuildContext ctx;
  ctx.container = "x";
  materialize(ctx, dir.path());
  try {
    b.build(ctx, dir.path(), ImagePlan{"a", "b:1", true, ""});
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::builder_unavailable);
  }
}
