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

// Bean-validation service: a 20-constraint DTO that random payloads almost
// never satisfy, plus an endpoint whose body the document leaves open.

#include "src/fixtures/fixtures.h"
#include "wbfuzz/fixture_data.h"

namespace wbfuzz::fixtures {
namespace {

using K = GeneTemplate::Kind;
using V = ValidationConstraint;

const DtoShape& ValidDto() {
  static const DtoShape kShape{
      "ValidDto",
      {
          Field("a", K::kInteger, {V::Min(5)}),
          Field("b", K::kInteger, {V::Max(10)}),
          Field("c", K::kInteger, {C(ConstraintKind::kPositive)}),
          Field("d", K::kInteger, {C(ConstraintKind::kPositiveOrZero)}),
          Field("e", K::kInteger, {C(ConstraintKind::kNegative)}),
          Field("f", K::kInteger, {C(ConstraintKind::kNegativeOrZero)}),
          Field("g", K::kInteger, {C(ConstraintKind::kNotNull), V::Min(-50), V::Max(50)}),
          Field("h", K::kString, {C(ConstraintKind::kNotNull), V::Size(3, 8)}),
          Field("i", K::kString, {C(ConstraintKind::kNotBlank)}),
          Field("j", K::kString, {C(ConstraintKind::kNotEmpty)}),
          Field("k", K::kBoolean, {C(ConstraintKind::kNotNull), C(ConstraintKind::kAssertTrue)}),
          Field("l", K::kBoolean, {C(ConstraintKind::kAssertFalse)}),
          Field("m", K::kString, {C(ConstraintKind::kNotNull), V::Pattern("[a-z]{3}-[0-9]{2}")}),
          Field("n", K::kString, {C(ConstraintKind::kNull)}),
          Field("o", K::kFloat, {C(ConstraintKind::kNotNull), V::Min(100), V::Max(200)}),
          Field("p", K::kString, {C(ConstraintKind::kNotNull), V::OneOf({"RED", "GREEN", "BLUE"})}),
          Field("q", K::kInteger, {C(ConstraintKind::kNotNull), V::Min(1000)}),
          Field("r", K::kString, {V::Size(0, 4)}),
          Field("s", K::kLong, {C(ConstraintKind::kNotNull), V::Max(-1000)}),
          Field("t", K::kString, {C(ConstraintKind::kNotNull), V::Pattern("[A-Z]+")}),
      }};
  return kShape;
}

const DtoShape& RawDto() {
  static const DtoShape kShape{
      "RawDto",
      {
          Field("amount", K::kFloat,
                {C(ConstraintKind::kImpliedNotNull), C(ConstraintKind::kPositive)}),
          Field("note", K::kString, {V::Size(0, 20)}),
      }};
  return kShape;
}

HttpResponse PostValid(RequestContext& ctx) {
  const Json dto = ctx.ReadDto(ValidDto());
  ctx.Cover("valid:L1");
  if (!ctx.Validate(dto, ValidDto())) throw HttpError(400, "constraint violation");
  ctx.Cover("valid:L2");
  if (dto["b"].is_number_integer() &&
      ctx.Compare("valid:1", dto["b"].get<double>(), CmpOp::kEq, 10)) {
    ctx.Cover("valid:L3");
    throw SutCrash("ArithmeticException", "/ by zero");
  }
  Json body = Json::object();
  body["id"] = 1;
  body["score"] = dto["q"].get<int64_t>() - 1000;
  return Respond(201, body);
}

HttpResponse GetValid(RequestContext& ctx) {
  const int64_t id = PathInt(ctx, "id");
  if (!ctx.Compare("valid:2", static_cast<double>(id), CmpOp::kEq, 42)) {
    throw HttpError(404, "no such record");
  }
  ctx.Cover("valid:L4");
  Json body = Json::object();
  body["id"] = id;
  body["name"] = "answer";
  return Respond(200, body);
}

HttpResponse PostRaw(RequestContext& ctx) {
  const Json dto = ctx.ReadDto(RawDto());
  ctx.Cover("raw:L1");
  if (!ctx.Validate(dto, RawDto())) throw HttpError(400, "constraint violation");
  const double amount = dto["amount"].get<double>();
  if (ctx.Compare("raw:1", amount, CmpOp::kGt, 500)) {
    ctx.Cover("raw:L2");
    // Not declared in the document: a schema mismatch.
    return Respond(202, Json{{"queued", true}});
  }
  ctx.Cover("raw:L3");
  return Respond(200, Json{{"accepted", true}});
}

}  // namespace

SutDescriptor ValidBeans() {
  SutDescriptor sut;
  sut.id = "validbeans";
  sut.openapi = std::string(FixtureFile("validbeans/openapi.yaml"));
  sut.format = DocumentFormat::kYaml;
  sut.routes = {
      {"POST", "/api/valid", &PostValid},
      {"GET", "/api/valid/{id}", &GetValid},
      {"POST", "/api/raw", &PostRaw},
  };
  sut.probes = {"valid:L1", "valid:L2", "valid:L3", "valid:L4", "raw:L1", "raw:L2", "raw:L3"};
  return sut;
}

}  // namespace wbfuzz::fixtures
