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

// Job queue with sleeping workers and a periodic cleanup task that writes
// to the database. Short delays sleep inline; longer ones are handed to a
// background worker that logs once it wakes up.

#include <algorithm>
#include <chrono>

#include "src/fixtures/fixtures.h"
#include "wbfuzz/fixture_data.h"

namespace wbfuzz::fixtures {
namespace {

using std::chrono::milliseconds;

constexpr int64_t kInlineLimitMs = 20;
constexpr int64_t kWorkerMinimumMs = 500;

HttpResponse SubmitJob(RequestContext& ctx) {
  const std::string name = ctx.Param("name").value_or("");
  const auto delay = ctx.ParseInt("submit:1", ctx.Param("delay").value_or(""));
  if (!delay || *delay < 0) throw HttpError(400, "bad delay");
  Json row = Json::object();
  row["name"] = name;
  row["delay_ms"] = *delay;
  const auto inserted = ctx.Insert("job", row);
  if (!inserted.ok) throw HttpError(400, inserted.error);
  const Json id = inserted.row["id"];
  if (ctx.Compare("submit:2", static_cast<double>(*delay), CmpOp::kLt, kInlineLimitMs)) {
    ctx.Cover("submit:L1");
    ctx.Sleep(milliseconds(*delay));
  } else {
    ctx.Cover("submit:L2");
    const int64_t wait = std::max(*delay, kWorkerMinimumMs);
    ctx.Spawn("worker", [id, wait](TaskContext& task) {
      task.Sleep(milliseconds(wait));
      Json log = Json::object();
      log["job_id"] = id;
      log["note"] = "done";
      task.Insert("job_log", log);
      task.Cover("worker:L1");
    });
  }
  return Respond(202, Json{{"id", id}});
}

HttpResponse GetJob(RequestContext& ctx) {
  const int64_t id = PathInt(ctx, "id");
  const auto rows = ctx.Select("job", [id](const Json& r) { return r["id"] == id; });
  if (rows.empty()) throw HttpError(404, "no such job");
  ctx.Cover("job:L1");
  Json body = Json::object();
  body["id"] = id;
  body["name"] = rows.front()["name"];
  return Respond(200, body);
}

HttpResponse GetLog(RequestContext& ctx) {
  const auto rows = ctx.Select("job_log");
  ctx.Cover(rows.empty() ? "log:L1" : "log:L2");
  return Respond(200, Json{{"entries", rows.size()}});
}

void Cleanup(TaskContext& task) {
  Json log = Json::object();
  log["job_id"] = 0;
  log["note"] = "cleanup";
  task.Insert("job_log", log);
  task.db().Delete("job", [](const Json& r) { return r["delay_ms"] == 0; });
}

}  // namespace

SutDescriptor Clockwork() {
  SutDescriptor sut;
  sut.id = "clockwork";
  sut.openapi = std::string(FixtureFile("clockwork/openapi.json"));
  sut.format = DocumentFormat::kJson;
  sut.tables = ParseTableSchemas(FixtureFile("clockwork/tables.txt"));
  sut.routes = {
      {"POST", "/jobs", &SubmitJob},
      {"GET", "/jobs/{id}", &GetJob},
      {"GET", "/jobs/log", &GetLog},
  };
  sut.scheduled = {{"cleanup", milliseconds(10), &Cleanup}};
  sut.seed = [](Database& db) {
    db.Insert("job", Json{{"name", "nightly"}, {"delay_ms", 0}});
    db.Insert("job", Json{{"name", "backup"}, {"delay_ms", 2500}});
  };
  sut.probes = {"submit:L1", "submit:L2", "worker:L1", "job:L1", "log:L1", "log:L2"};
  return sut;
}

}  // namespace wbfuzz::fixtures
