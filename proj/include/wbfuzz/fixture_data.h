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

#ifndef WBFUZZ_FIXTURE_DATA_H_
#define WBFUZZ_FIXTURE_DATA_H_

// Fixture documents compiled into the binary (OpenAPI files, table and
// entity definitions), addressed by their path under fixtures/.

#include <string>
#include <string_view>
#include <vector>

namespace wbfuzz {

// Throws ConfigError if the file is not embedded.
std::string_view FixtureFile(std::string_view name);
std::vector<std::string> FixtureFiles();

}  // namespace wbfuzz

#endif  // WBFUZZ_FIXTURE_DATA_H_
