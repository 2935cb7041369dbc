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

// Verification sessions stored in SQL and loaded through an entity whose
// rules are stricter than the table: primitive fields cannot hold NULL and
// enum fields only accept their listed names.

#include <array>

#include "src/fixtures/fixtures.h"
#include "wbfuzz/fixture_data.h"

namespace wbfuzz::fixtures {
namespace {

constexpr std::array<std::string_view, 2> kTanTypes = {"TEST", "EVENT"};
const std::vector<std::string> kTanTypeNames(kTanTypes.begin(), kTanTypes.end());

Database::Filter ById(int64_t id) {
  return [id](const Json& row) { return row["id"].is_number_integer() && row["id"] == id; };
}

Json LoadSession(RequestContext& ctx, int64_t id) {
  const auto rows = ctx.Select("app_session", ById(id));
  if (rows.empty()) throw HttpError(404, "no session");
  return ctx.LoadEntity("VerificationAppSession", rows.front());
}

HttpResponse GetSession(RequestContext& ctx) {
  const int64_t id = PathInt(ctx, "id");
  const Json session = LoadSession(ctx, id);
  ctx.Cover("session:L1");
  Json body = Json::object();
  body["id"] = session["id"];
  body["teleTanType"] = session["teleTanType"];
  body["tanCounter"] = session["tanCounter"];
  return Respond(200, body);
}

HttpResponse CountSessions(RequestContext& ctx) {
  const std::string type = ctx.Param("type").value_or("");
  const auto index = ctx.EnumValueOf("count:1", kTanTypeNames, type);
  if (!index) throw HttpError(400, "unknown type");
  int64_t count = 0;
  for (const Json& row : ctx.Select("app_session")) {
    const Json session = ctx.LoadEntity("VerificationAppSession", row);
    if (session["teleTanType"].is_string() &&
        ctx.StrEquals("count:2", session["teleTanType"].get<std::string>(), type)) {
      ++count;
    }
  }
  ctx.Cover(count > 0 ? "count:L1" : "count:L2");
  return Respond(200, Json{{"count", count}});
}

HttpResponse CreateSession(RequestContext& ctx) {
  const Json body = ctx.Body();
  if (!body.is_object() || !body["teleTanType"].is_string()) {
    throw HttpError(400, "teleTanType required");
  }
  const std::string type = body["teleTanType"].get<std::string>();
  if (!ctx.EnumValueOf("create:1", kTanTypeNames, type)) throw HttpError(400, "unknown type");
  Json row = Json::object();
  row["version"] = 0;
  row["tan_counter"] = 0;
  row["teletan_type"] = type;
  row["sot"] = "TELETAN";
  auto inserted = ctx.Insert("app_session", row);
  if (!inserted.ok) throw SutCrash("DataIntegrityViolationException", inserted.error);
  ctx.Cover("create:L1");
  return Respond(201, Json{{"id", inserted.row["id"]}});
}

HttpResponse IssueTan(RequestContext& ctx) {
  const int64_t id = PathInt(ctx, "id");
  const Json session = LoadSession(ctx, id);
  const int64_t counter = session["tanCounter"].get<int64_t>();
  if (ctx.Compare("tan:1", static_cast<double>(counter), CmpOp::kGe, 3)) {
    ctx.Cover("tan:L1");
    throw HttpError(429, "tan limit reached");
  }
  ctx.db().Update("app_session", ById(id), Json{{"tan_counter", counter + 1}});
  ctx.Cover("tan:L2");
  return Respond(200, Json{{"tanCounter", counter + 1}});
}

}  // namespace

SutDescriptor AppSession() {
  SutDescriptor sut;
  sut.id = "appsession";
  sut.openapi = std::string(FixtureFile("appsession/openapi.json"));
  sut.format = DocumentFormat::kJson;
  sut.tables = ParseTableSchemas(FixtureFile("appsession/tables.txt"));
  sut.entities = ParseEntities(FixtureFile("appsession/entities.txt"));
  sut.routes = {
      {"GET", "/api/sessions/{id}", &GetSession},
      {"GET", "/api/sessions", &CountSessions},
      {"POST", "/api/sessions", &CreateSession},
      {"POST", "/api/sessions/{id}/tan", &IssueTan},
  };
  sut.probes = {"session:L1", "count:L1", "count:L2", "create:L1", "tan:L1", "tan:L2"};
  return sut;
}

}  // namespace wbfuzz::fixtures
