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

// Payment notification listener. The document declares only the consumer
// id; the handler reads every query parameter into a map and looks up the
// names it needs, as third-party listener libraries do.

#include "src/fixtures/fixtures.h"
#include "wbfuzz/fixture_data.h"

namespace wbfuzz::fixtures {
namespace {

HttpResponse PostIpn(RequestContext& ctx) {
  PathInt(ctx, "consumerID");
  const ElementMap params = ctx.ParamMap();
  ctx.Cover("ipn:L1");
  // Framework-level method override; never worth discovering.
  ctx.MapGet("ipn:1", params, std::string("_method"));
  const auto payer = ctx.MapGet("ipn:2", params, std::string("payer_email"));
  const auto gross = ctx.MapGet("ipn:3", params, std::string("mc_gross"));
  if (!gross) throw SutCrash("NullPointerException", "mc_gross is null");
  const auto quantity = ctx.ParseFloat("ipn:4", AsText(*gross));
  if (!quantity) throw SutCrash("NumberFormatException", "for input string");
  ctx.Cover("ipn:L2");
  if (ctx.Compare("ipn:5", *quantity, CmpOp::kGt, 1000)) {
    ctx.Cover("ipn:L3");
    if (payer && ctx.StrEquals("ipn:6", AsText(*payer), "vip@example.com")) {
      ctx.Cover("ipn:L4");
      return Respond(200, Json{{"status", "vip"}});
    }
    return Respond(200, Json{{"status", "large"}});
  }
  ctx.Cover("ipn:L5");
  return Respond(200, Json{{"status", "ok"}});
}

HttpResponse GetStatus(RequestContext& ctx) {
  ctx.Header("X-Known");
  std::string mode = "normal";
  for (const Element& name : ctx.HeaderNames()) {
    if (ctx.StrEquals("status:1", AsText(name), "X-Trace-Mode")) {
      ctx.Cover("status:L1");
      const auto value = ctx.Header("X-Trace-Mode");
      if (value && ctx.StrEquals("status:2", *value, "verbose")) {
        ctx.Cover("status:L2");
        mode = "verbose";
      }
    }
  }
  ctx.Cover("status:L3");
  return Respond(200, Json{{"mode", mode}});
}

}  // namespace

SutDescriptor HiddenParams() {
  SutDescriptor sut;
  sut.id = "hiddenparams";
  sut.openapi = std::string(FixtureFile("hiddenparams/openapi.json"));
  sut.format = DocumentFormat::kJson;
  sut.routes = {
      {"POST", "/paypal/ipn/consumer/{consumerID}", &PostIpn},
      {"GET", "/paypal/status", &GetStatus},
  };
  sut.probes = {"ipn:L1", "ipn:L2", "ipn:L3", "ipn:L4", "ipn:L5",
                "status:L1", "status:L2", "status:L3"};
  return sut;
}

}  // namespace wbfuzz::fixtures
