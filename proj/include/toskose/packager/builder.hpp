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

#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "toskose/packager/artifacts.hpp"

namespace toskose::packager {

class ImageBuilder {
 public:
  virtual ~ImageBuilder() = default;
  // Build the image for a materialised context; returns its reference.
  virtual std::string build(const BuildContext& ctx, const std::filesystem::path& dir,
                            const ImagePlan& plan) = 0;
  virtual void push(const ImagePlan& plan) = 0;
};

// Leaves the materialised contexts as the result and builds nothing.
class DryRunBuilder : public ImageBuilder {
 public:
  std::string build(const BuildContext& ctx, const std::filesystem::path& dir,
                    const ImagePlan& plan) override;
  void push(const ImagePlan& plan) override;
};

// Talks to a container engine's HTTP API ("http://host:port" or
// "unix:///var/run/docker.sock"). Throws Error with builder_unavailable or
// build_failed.
class EngineBuilder : public ImageBuilder {
 public:
  explicit EngineBuilder(std::string url);
  ~EngineBuilder() override;
  std::string build(const BuildContext& ctx, const std::filesystem::path& dir,
                    const ImagePlan& plan) override;
  void push(const ImagePlan& plan) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::unique_ptr<ImageBuilder> make_builder(const std::string& docker_url);

// Materialise every context under out_dir/<container>, build it and push
// when asked. Returns one reference per container in model order;
// standalone containers keep their base image.
std::vector<std::string> build_images(const EnrichedModel& m, const std::vector<BuildContext>& contexts,
                                      const std::filesystem::path& out_dir, ImageBuilder& builder,
                                      bool push);

}  // namespace toskose::packager
