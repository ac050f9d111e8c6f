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

#include <httplib.h>

#include "toskose/common/error.hpp"
#include "toskose/xmlrpc/xmlrpc.hpp"

namespace toskose::xmlrpc {

struct Client::Impl {
  httplib::Client http;

  Impl(const Endpoint& e, const Timeouts& t) : http(e.host, e.port) {
    http.set_connection_timeout(t.connect);
    http.set_read_timeout(t.read);
    http.set_write_timeout(t.read);
    http.set_keep_alive(false);
    if (!e.user.empty()) http.set_basic_auth(e.user, e.password);
  }
};

Client::Client(Endpoint endpoint, Timeouts timeouts)
    : endpoint_(std::move(endpoint)), impl_(std::make_unique<Impl>(endpoint_, timeouts)) {}

Client::~Client() = default;

Value Client::call(const std::string& method, const Value& params) {
  const std::string where = endpoint_.host + ":" + std::to_string(endpoint_.port);
  auto res = impl_->http.Post("/RPC2", encode_call(method, params), "text/xml");
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::Read || err == httplib::Error::Write) {
      fail(Errc::operation_timeout, method + " on " + where + ": " + httplib::to_string(err));
    }
    fail(Errc::unit_unreachable, method + " on " + where + ": " + httplib::to_string(err));
  }
  if (res->status == 401) fail(Errc::unit_unreachable, where + " rejected the credentials");
  if (res->status != 200) {
    fail(Errc::unit_unreachable, where + " answered HTTP " + std::to_string(res->status));
  }
  return decode_response(res->body);
}

}  // namespace toskose::xmlrpc
