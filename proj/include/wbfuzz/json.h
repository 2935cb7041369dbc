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

#ifndef WBFUZZ_JSON_H_
#define WBFUZZ_JSON_H_

#include "json.hpp"

namespace wbfuzz {

// Ordered so that serialized documents keep insertion order and stay
// byte-stable across runs.
using Json = nlohmann::ordered_json;

}  // namespace wbfuzz

#endif  // WBFUZZ_JSON_H_
