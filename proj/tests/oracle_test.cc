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


#include "wbfuzz/oracle.h"

#include "gtest/gtest.h"

namespace wbfuzz {
namespace {

ActionTemplate Created() {
  ActionTemplate t;
  t.verb = "POST";
  t.path = "/items";
  t.responses.push_back({201, {"id", "name"}, {"id"}, true});
  t.responses.push_back({400, {}, {}, false});
  return t;
}

HttpResponse Response(int status, Json body) {
  HttpResponse r;
  r.status = status;
  r.body = std::move(body);
  return r;
}

TEST(ClassifyTest, ServerErrorUsesFirstMessageLine) {
  const auto t = Created();
  const auto faults = Classify(Response(500, Json{{"error", "NullPointerException: x\n at a.b"}}),
                               &t, "POST", "/items", 0, {});
  ASSERT_EQ(faults.size(), 1u);
  EXPECT_EQ(faults[0].kind, FaultKind::kServerError);
  EXPECT_EQ(faults[0].discriminator, "NullPointerException: x");
  EXPECT_EQ(faults[0].status, 500);
  EXPECT_EQ(faults[0].DedupKey(), "POST /items ServerError500 NullPointerException: x");
}

TEST(ClassifyTest, EntityCrashAnnotatesTheFailingAction) {
  const auto t = Created();
  ExecutionTrace trace;
  trace.entity_crashes.push_back({1, "item", 3, "EntityParseException: null value\nmore"});
  const auto other = Classify(Response(500, Json{{"error", "boom"}}), &t, "POST", "/items", 0, trace);
  ASSERT_EQ(other.size(), 1u);
  const auto faults = Classify(Response(500, Json{{"error", "boom"}}), &t, "POST", "/items", 1, trace);
  ASSERT_EQ(faults.size(), 2u);
  EXPECT_EQ(faults[0].kind, FaultKind::kServerError);
  EXPECT_EQ(faults[1].kind, FaultKind::kEntityParseCrash);
  EXPECT_EQ(faults[1].discriminator, "EntityParseException: null value");
}

TEST(ClassifyTest, DeclaredConformantResponseIsClean) {
  const auto t = Created();
  EXPECT_TRUE(Classify(Response(201, Json{{"id", 1}}), &t, "POST", "/items", 0, {}).empty());
  EXPECT_TRUE(Classify(Response(400, nullptr), &t, "POST", "/items", 0, {}).empty());
}

TEST(ClassifyTest, UndeclaredStatusIsMismatch) {
  const auto t = Created();
  const auto faults = Classify(Response(202, nullptr), &t, "POST", "/items", 0, {});
  ASSERT_EQ(faults.size(), 1u);
  EXPECT_EQ(faults[0].kind, FaultKind::kSchemaMismatch);
  EXPECT_EQ(faults[0].discriminator, "undeclared status 202");
}

TEST(ClassifyTest, DefaultResponseCoversAnyStatus) {
  auto t = Created();
  t.responses.push_back({0, {}, {}, false});
  EXPECT_TRUE(Classify(Response(418, nullptr), &t, "POST", "/items", 0, {}).empty());
}

TEST(ClassifyTest, BodyShapeMismatch) {
  const auto t = Created();
  auto missing = Classify(Response(201, Json{{"name", "x"}}), &t, "POST", "/items", 0, {});
  ASSERT_EQ(missing.size(), 1u);
  EXPECT_EQ(missing[0].kind, FaultKind::kSchemaMismatch);
  EXPECT_EQ(missing[0].discriminator, "status 201 body lacks id");
  auto scalar = Classify(Response(201, Json(5)), &t, "POST", "/items", 0, {});
  ASSERT_EQ(scalar.size(), 1u);
  EXPECT_EQ(scalar[0].discriminator, "status 201 body is not an object");
}

TEST(ClassifyTest, UnknownEndpointOnlyReportsServerErrors) {
  EXPECT_TRUE(Classify(Response(404, nullptr), nullptr, "GET", "/x", 0, {}).empty());
  EXPECT_EQ(Classify(Response(500, nullptr), nullptr, "GET", "/x", 0, {}).size(), 1u);
}

TEST(ErrorDiscriminatorTest, Shapes) {
  EXPECT_EQ(ErrorDiscriminator(nullptr), "");
  EXPECT_EQ(ErrorDiscriminator(Json{{"error", 3}}), "");
  EXPECT_EQ(ErrorDiscriminator(Json{{"error", "a\nb\nc"}}), "a");
}

}  // namespace
}  // namespace wbfuzz
