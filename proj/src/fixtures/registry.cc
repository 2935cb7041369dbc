// Copyright 2026 The wbfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <map>
#include <memory>
#include <mutex>

#include "src/fixtures/fixtures.h"
#include "wbfuzz/errors.h"

namespace wbfuzz {

namespace fixtures {

int64_t PathInt(RequestContext& ctx, const std::string& name) {
  const auto raw = ctx.PathParam(name);
  int64_t v = 0;
  if (!raw) throw HttpError(400, "missing path parameter " + name);
  auto [ptr, ec] = std::from_chars(raw->data(), raw->data() + raw->size(), v);
  if (ec != std::errc() || ptr != raw->data() + raw->size()) {
    throw HttpError(400, "malformed path parameter " + name);
  }
  return v;
}

}  // namespace fixtures

namespace {

using Factory = SutDescriptor (*)();

const std::vector<std::pair<std::string, Factory>>& Factories() {
  static const std::vector<std::pair<std::string, Factory>> kFactories = {
      {"appsession", &fixtures::AppSession},   {"clockwork", &fixtures::Clockwork},
      {"collections", &fixtures::Collections}, {"hiddenparams", &fixtures::HiddenParams},
      {"stringops", &fixtures::StringOps},     {"validbeans", &fixtures::ValidBeans},
  };
  return kFactories;
}

}  // namespace

std::vector<std::string> FixtureNames() {
  std::vector<std::string> out;
  for (const auto& [name, factory] : Factories()) out.push_back(name);
  return out;
}

std::shared_ptr<const SutDescriptor> LoadFixture(std::string_view name) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const SutDescriptor>, std::less<>> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(name); it != cache.end()) return it->second;
  for (const auto& [fixture, factory] : Factories()) {
    if (fixture == name) {
      auto sut = std::make_shared<const SutDescriptor>(factory());
      cache.emplace(fixture, sut);
      return sut;
    }
  }
  std::string known;
  for (const auto& n : FixtureNames()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown fixture '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace wbfuzz
