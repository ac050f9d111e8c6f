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

#include <cstdio>
#include <random>

#include "support.hpp"
#include "toskose/common/error.hpp"
#include "toskose/xmlrpc/xmlrpc.hpp"

using namespace toskose;
using xmlrpc::Value;

namespace {

std::string random_text(std::mt19937& rng) {
  static const std::string alphabet = "abcXYZ 019<>&'\"\t\n;=%$#{}";
  std::uniform_int_distribution<std::size_t> len(0, 12), pick(0, alphabet.size() - 1);
  std::string s;
  for (auto n = len(rng); n > 0; --n) s += alphabet[pick(rng)];
  if (rng() % 5 == 0) s += "\xc3\xa9\xe2\x82\xac";  // é€
  return s;
}

Value random_value(std::mt19937& rng, int depth) {
  switch (rng() % (depth > 2 ? 4 : 6)) {
    case 0: return random_text(rng);
    case 1: return static_cast<long long>(rng() % 2000000) - 1000000;
    case 2: return rng() % 2 == 0;
    case 3: return (static_cast<long long>(rng()) << 20) + 7;
    case 4: {
      Value a = Value::array();
      for (auto n = rng() % 4; n > 0; --n) a.push_back(random_value(rng, depth + 1));
      return a;
    }
    default: {
      Value o = Value::object();
      for (auto n = rng() % 4; n > 0; --n) o["k" + random_text(rng)] = random_value(rng, depth + 1);
      return o;
    }
  }
}

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

}  // namespace

TEST_SUITE("codec") {
  TEST_CASE("random values survive call and response encoding") {
    std::mt19937 rng(7);
    for (int i = 0; i < 300; ++i) {
      Value params = Value::array();
      for (auto n = rng() % 4; n > 0; --n) params.push_back(random_value(rng, 0));
      const auto call = xmlrpc::decode_call(xmlrpc::encode_call("m.x", params));
      CHECK(call.method == "m.x");
      CHECK(call.params == params);
      const auto v = random_value(rng, 0);
      CHECK(xmlrpc::decode_response(xmlrpc::encode_response(v)) == v);
    }
  }

  TEST_CASE("doubles and nil") {
    CHECK(xmlrpc::decode_response(xmlrpc::encode_response(2.5)) == Value(2.5));
    CHECK(xmlrpc::decode_response(xmlrpc::encode_response(nullptr)).is_null());
  }

  TEST_CASE("untyped value is a string") {
    const auto v = xmlrpc::decode_response(
        "<methodResponse><params><param><value>plain</value></param></params></methodResponse>");
    CHECK(v == Value("plain"));
  }

  TEST_CASE("invalid bytes become question marks") {
    const std::string raw = std::string("ok\x01\xff", 4) + "\xc3";
    CHECK(xmlrpc::decode_response(xmlrpc::encode_response(raw)) == Value("ok???"));
  }

  TEST_CASE("fault response throws with its code") {
    try {
      xmlrpc::decode_response(xmlrpc::encode_fault(70, "NOT_RUNNING: api-start"));
      FAIL("expected fault");
    } catch (const xmlrpc::Fault& f) {
      CHECK(f.code() == 70);
      CHECK(std::string(f.what()) == "NOT_RUNNING: api-start");
    }
  }

  TEST_CASE("malformed documents") {
    for (const char* doc : {"", "<methodCall>", "<methodCall></methodCall>",
                            "<methodCall><methodName>a</methodName><params><param><value><int>x</int></value></param></params></methodCall>",
                            "<methodCall><methodName>a</methodName><params><param><value><blob/></value></param></params></methodCall>"}) {
      CAPTURE(doc);
      try {
        xmlrpc::decode_call(doc);
        FAIL("accepted");
      } catch (const Error& e) {
        CHECK(e.code() == Errc::syntax_error);
      }
    }
  }
}

TEST_SUITE("interop") {
  TEST_CASE("python reads what we encode") {
    fs::TempDir dir;
    const Value params = Value::array({"api-start", true, 42, 1LL << 40, Value{{"a", "x<y"}, {"n", Value::array({1, 2})}}});
    fs::write_file(dir.path() / "call.xml", xmlrpc::encode_call("supervisor.startProcess", params));
    const auto out = run("python3 -c \"import json,sys,xmlrpc.client as x; p,m=x.loads(open(sys.argv[1]).read()); "
                         "print(json.dumps([m,list(p)]))\" " + (dir.path() / "call.xml").string());
    const auto got = Value::parse(out);
    CHECK(got[0] == "supervisor.startProcess");
    CHECK(got[1] == params);
  }

  TEST_CASE("we read what python encodes") {
    const auto xml = run("python3 -c \"import xmlrpc.client as x; "
                         "print(x.dumps(({'name':'gui-start','state':20,'ok':True,'l':['a',1.5]},), methodresponse=True), end='')\"");
    const auto v = xmlrpc::decode_response(xml);
    CHECK(v["name"] == "gui-start");
    CHECK(v["state"] == 20);
    CHECK(v["ok"] == true);
    CHECK(v["l"] == Value::array({"a", 1.5}));

    const auto fault = run("python3 -c \"import xmlrpc.client as x; print(x.dumps(x.Fault(10,'BAD_NAME: nope')), end='')\"");
    CHECK_THROWS_AS(xmlrpc::decode_response(fault), xmlrpc::Fault);
  }
}

TEST_SUITE("dispatcher") {
  TEST_CASE("routing, listMethods and error mapping") {
    xmlrpc::Dispatcher d;
    d.add("echo", [](const Value& p) { return p; });
    d.add("boom", [](const Value&) -> Value { throw xmlrpc::Fault(60, "ALREADY_STARTED"); });
    d.add("bad", [](const Value&) -> Value { fail(Errc::syntax_error, "nope"); });
    d.add("io", [](const Value&) -> Value { fail(Errc::io_error, "disk"); });

    CHECK(xmlrpc::decode_response(d.handle(xmlrpc::encode_call("echo", Value::array({1, "a"})))) ==
          Value::array({1, "a"}));
    const auto methods = xmlrpc::decode_response(d.handle(xmlrpc::encode_call("system.listMethods", Value::array())));
    CHECK(methods == Value::array({"bad", "boom", "echo", "io", "system.listMethods"}));

    auto code_of = [&](const std::string& request) {
      try {
        xmlrpc::decode_response(d.handle(request));
      } catch (const xmlrpc::Fault& f) {
        return f.code();
      }
      return 0;
    };
    CHECK(code_of(xmlrpc::encode_call("missing", Value::array())) == xmlrpc::faults::kUnknownMethod);
    CHECK(code_of(xmlrpc::encode_call("boom", Value::array())) == 60);
    CHECK(code_of(xmlrpc::encode_call("bad", Value::array())) == xmlrpc::faults::kBadArguments);
    CHECK(code_of(xmlrpc::encode_call("io", Value::array())) == xmlrpc::faults::kFailed);
    CHECK(code_of("<garbage") == xmlrpc::faults::kBadArguments);
  }
}
