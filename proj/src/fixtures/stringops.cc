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

// String handling: a long constant random text cannot hit, a prefixed code,
// UUID parsing and link parsing.

#include "src/fixtures/fixtures.h"
#include "wbfuzz/fixture_data.h"

namespace wbfuzz::fixtures {
namespace {

constexpr char kSecret[] = "A quite long string that it is unlikely to get at random!!!!";
static_assert(sizeof(kSecret) - 1 == 60);

HttpResponse Check(RequestContext& ctx) {
  const std::string text = ctx.Param("text").value_or("");
  if (ctx.StrEquals("check:1", text, kSecret)) {
    ctx.Cover("check:L1");
    return Respond(200, Json{{"match", true}});
  }
  ctx.Cover("check:L2");
  return Respond(200, Json{{"match", false}});
}

HttpResponse Prefix(RequestContext& ctx) {
  const std::string code = ctx.Param("code").value_or("");
  if (!ctx.StrStartsWith("prefix:1", code, "ORD-")) throw HttpError(400, "not an order code");
  ctx.Cover("prefix:L1");
  const auto number = ctx.ParseInt("prefix:2", code.substr(4));
  if (!number) throw HttpError(400, "bad order number");
  ctx.Cover("prefix:L2");
  if (ctx.Compare("prefix:3", static_cast<double>(*number), CmpOp::kGt, 1000)) {
    ctx.Cover("prefix:L3");
  }
  return Respond(200, Json{{"order", *number}});
}

HttpResponse Uuid(RequestContext& ctx) {
  const std::string raw = ctx.PathParam("id").value_or("");
  const auto uuid = ctx.UuidFromString("uuid:1", raw);
  if (!uuid) throw HttpError(400, "invalid uuid");
  ctx.Cover("uuid:L1");
  return Respond(200, Json{{"uuid", *uuid}});
}

HttpResponse Link(RequestContext& ctx) {
  const std::string target = ctx.Param("target").value_or("");
  if (const auto url = ctx.UrlParse("link:1", target)) {
    ctx.Cover("link:L1");
    if (ctx.StrStartsWith("link:2", *url, "https:")) {
      ctx.Cover("link:L2");
      return Respond(200, Json{{"kind", "secure"}});
    }
    return Respond(200, Json{{"kind", "url"}});
  }
  if (ctx.UriParse("link:3", target)) {
    ctx.Cover("link:L3");
    return Respond(200, Json{{"kind", "uri"}});
  }
  throw HttpError(400, "not a link");
}

HttpResponse Format(RequestContext& ctx) {
  const std::string text = ctx.Param("text").value_or("");
  if (ctx.StrContains("format:1", text, "%")) {
    // Formatting user text as a pattern: a stray conversion blows up.
    throw SutCrash("UnknownFormatConversionException", "conversion = '%'");
  }
  ctx.Cover("format:L1");
  return Respond(200, Json{{"text", text}});
}

}  // namespace

SutDescriptor StringOps() {
  SutDescriptor sut;
  sut.id = "stringops";
  sut.openapi = std::string(FixtureFile("stringops/openapi.yaml"));
  sut.format = DocumentFormat::kYaml;
  sut.routes = {
      {"GET", "/strings/check", &Check},   {"GET", "/strings/prefix", &Prefix},
      {"GET", "/strings/uuid/{id}", &Uuid}, {"GET", "/strings/link", &Link},
      {"GET", "/strings/format", &Format},
  };
  sut.probes = {"check:L1",  "check:L2", "prefix:L1", "prefix:L2", "prefix:L3", "uuid:L1",
                "link:L1",   "link:L2",  "link:L3",   "format:L1"};
  return sut;
}

}  // namespace wbfuzz::fixtures
