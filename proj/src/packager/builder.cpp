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

#include "toskose/packager/builder.hpp"

#include <httplib.h>
#include <sys/socket.h>

#include <sstream>

#include "toskose/common/error.hpp"
#include "toskose/common/tar.hpp"

namespace toskose::packager {
namespace {

std::pair<std::string, std::string> split_ref(const std::string& ref) {
  const auto colon = ref.rfind(':');
  const auto slash = ref.rfind('/');
  if (colon == std::string::npos || (slash != std::string::npos && colon < slash)) return {ref, "latest"};
  return {ref.substr(0, colon), ref.substr(colon + 1)};
}

// Engine responses stream one JSON object per line; any "error" member
// means the operation failed even though the status was 200.
void check_stream(const std::string& body, const std::string& what) {
  std::istringstream lines(body);
  std::string line;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_object() && j.contains("error")) fail(Errc::build_failed, what + ": " + j["error"].dump());
  }
}

}  // namespace

std::string DryRunBuilder::build(const BuildContext&, const std::filesystem::path&, const ImagePlan& plan) {
  return plan.target_image;
}

void DryRunBuilder::push(const ImagePlan&) {}

struct EngineBuilder::Impl {
  std::unique_ptr<httplib::Client> http;
  std::string url;
};

EngineBuilder::EngineBuilder(std::string url) : impl_(std::make_unique<Impl>()) {
  impl_->url = url;
  if (url.starts_with("unix://")) {
    impl_->http = std::make_unique<httplib::Client>(url.substr(7));
    impl_->http->set_address_family(AF_UNIX);
  } else {
    impl_->http = std::make_unique<httplib::Client>(url);
  }
  if (!impl_->http->is_valid()) fail(Errc::builder_unavailable, "unusable engine URL " + url);
  impl_->http->set_connection_timeout(std::chrono::seconds(5));
  impl_->http->set_read_timeout(std::chrono::minutes(30));
}

EngineBuilder::~EngineBuilder() = default;

std::string EngineBuilder::build(const BuildContext& ctx, const std::filesystem::path& dir, const ImagePlan& plan) {
  const auto body = tar::archive_directory(dir);
  const auto path = "/build?dockerfile=Dockerfile&t=" + httplib::detail::encode_query_param(plan.target_image);
  auto res = impl_->http->Post(path, body, "application/x-tar");
  if (!res) fail(Errc::builder_unavailable, impl_->url + ": " + httplib::to_string(res.error()));
  if (res->status != 200) {
    fail(Errc::build_failed, ctx.container + ": engine answered " + std::to_string(res->status) + " " + res->body);
  }
  check_stream(res->body, ctx.container);
  return plan.target_image;
}

void EngineBuilder::push(const ImagePlan& plan) {
  const auto [name, tag] = split_ref(plan.target_image);
  httplib::Headers headers;
  const auto slash = name.find('/');
  const nlohmann::json auth{{"username", slash == std::string::npos ? "" : name.substr(0, slash)},
                            {"password", plan.registry_password}};
  headers.emplace("X-Registry-Auth", httplib::detail::base64_encode(auth.dump()));
  auto res = impl_->http->Post("/images/" + name + "/push?tag=" + httplib::detail::encode_query_param(tag),
                               headers, "", "application/json");
  if (!res) fail(Errc::builder_unavailable, impl_->url + ": " + httplib::to_string(res.error()));
  if (res->status != 200) {
    fail(Errc::build_failed, "push " + plan.target_image + ": engine answered " + std::to_string(res->status));
  }
  check_stream(res->body, "push " + plan.target_image);
}

std::unique_ptr<ImageBuilder> make_builder(const std::string& docker_url) {
  if (docker_url.empty()) return std::make_unique<DryRunBuilder>();
  return std::make_unique<EngineBuilder>(docker_url);
}

std::vector<std::string> build_images(const EnrichedModel& m, const std::vector<BuildContext>& contexts,
                                      const std::filesystem::path& out_dir, ImageBuilder& builder, bool push) {
  std::vector<std::string> refs;
  for (const auto& plan : m.containers) {
    const auto it = std::find_if(contexts.begin(), contexts.end(),
                                 [&](const BuildContext& c) { return c.container == plan.name; });
    if (!plan.image.toskosed || it == contexts.end()) {
      refs.push_back(plan.image.target_image);
      continue;
    }
    const auto dir = out_dir / plan.name;
    materialize(*it, dir);
    refs.push_back(builder.build(*it, dir, plan.image));
    if (push) builder.push(plan.image);
  }
  return refs;
}

}  // namespace toskose::packager
