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

// Collection, map and enum handling over request data: tag sets, a lookup
// table with a null entry, colors, magic numbers, stock purging and mutable
// settings.

#include <array>

#include "src/fixtures/fixtures.h"
#include "wbfuzz/fixture_data.h"

namespace wbfuzz::fixtures {
namespace {

const std::vector<std::string> kColors = {"RED", "GREEN", "BLUE"};

std::vector<Element> ArrayField(RequestContext& ctx, const char* name, bool integers) {
  const Json body = ctx.Body();
  if (!body.is_object() || !body.contains(name) || !body[name].is_array()) {
    throw HttpError(400, std::string(name) + " required");
  }
  std::vector<Element> out;
  for (const Json& v : body[name]) {
    if (integers && v.is_number_integer()) {
      out.emplace_back(v.get<int64_t>());
    } else if (!integers && v.is_string()) {
      out.emplace_back(v.get<std::string>());
    } else {
      throw HttpError(400, std::string("bad element in ") + name);
    }
  }
  return out;
}

HttpResponse Tags(RequestContext& ctx) {
  std::vector<Element> tags = ArrayField(ctx, "tags", false);
  const std::array<Element, 2> required = {Element{"alpha"}, Element{"beta"}};
  if (ctx.CollRemove("tags:1", tags, Element{"obsolete"})) ctx.Cover("tags:L1");
  if (ctx.CollIsEmpty("tags:2", tags)) throw HttpError(400, "no tags");
  if (ctx.CollContainsAll("tags:3", tags, required)) {
    ctx.Cover("tags:L2");
  } else {
    ctx.Cover("tags:L3");
  }
  return Respond(200);
}

const ElementMap& LookupTable() {
  static const ElementMap table = {
      {Element{"apple"}, Element{"fruit"}},
      {Element{"carrot"}, Element{"vegetable"}},
      {Element{"ghost"}, Element{}},
  };
  return table;
}

HttpResponse Lookup(RequestContext& ctx) {
  const Element key{ctx.Param("key").value_or("")};
  const auto value = ctx.MapGet("lookup:1", LookupTable(), key);
  if (!value) {
    if (ctx.MapContainsKey("lookup:2", LookupTable(), key)) {
      // The stored null is dereferenced.
      throw SutCrash("NullPointerException", "value is null");
    }
    throw HttpError(404, "unknown key");
  }
  ctx.Cover("lookup:L1");
  return Respond(200, Json{{"value", AsText(*value)}});
}

HttpResponse Color(RequestContext& ctx) {
  const auto index = ctx.EnumValueOf("color:1", kColors, ctx.Param("c").value_or(""));
  if (!index) throw HttpError(400, "unknown color");
  ctx.Cover(*index == 2 ? "color:L2" : "color:L1");
  return Respond(200);
}

HttpResponse Number(RequestContext& ctx) {
  const auto x = ctx.ParseInt("number:1", ctx.Param("x").value_or(""));
  if (!x) throw HttpError(400, "bad number");
  const Element e{*x};
  const std::array<Element, 3> lucky = {Element{int64_t{3}}, Element{int64_t{7}},
                                        Element{int64_t{42}}};
  if (ctx.CollContains("number:2", lucky, e)) {
    ctx.Cover("number:L1");
    return Respond(200, Json{{"kind", "lucky"}});
  }
  if (ctx.ObjEquals("number:3", e, Element{int64_t{13}})) {
    ctx.Cover("number:L2");
    return Respond(200, Json{{"kind", "unlucky"}});
  }
  ctx.Cover("number:L3");
  return Respond(200, Json{{"kind", "plain"}});
}

HttpResponse Purge(RequestContext& ctx) {
  const std::vector<Element> items = ArrayField(ctx, "items", true);
  std::vector<Element> stock = {Element{int64_t{1}}, Element{int64_t{2}}, Element{int64_t{3}},
                                Element{int64_t{5}}, Element{int64_t{8}}};
  if (ctx.CollRemoveAll("purge:1", stock, items)) ctx.Cover("purge:L1");
  if (ctx.CollIsEmpty("purge:2", stock)) ctx.Cover("purge:L2");
  return Respond(200, Json{{"left", stock.size()}});
}

HttpResponse Settings(RequestContext& ctx) {
  ElementMap settings = {
      {Element{"mode"}, Element{"fast"}},
      {Element{"level"}, Element{"3"}},
      {Element{"theme"}, Element{"dark"}},
  };
  const Element name{ctx.Param("name").value_or("")};
  const auto value = ctx.Param("value");
  const Element previous = ctx.MapGetOrDefault("settings:1", settings, name, Element{});
  if (!value) {
    if (!ctx.MapRemove("settings:2", settings, name)) throw HttpError(404, "unknown setting");
    ctx.Cover("settings:L1");
    return Respond(200, Json{{"previous", AsText(previous)}});
  }
  if (!ctx.MapReplace("settings:3", settings, name, Element{*value})) {
    throw HttpError(404, "unknown setting");
  }
  ctx.Cover("settings:L2");
  if (ctx.MapContainsValue("settings:4", settings, Element{"turbo"})) ctx.Cover("settings:L3");
  return Respond(200, Json{{"previous", AsText(previous)}});
}

}  // namespace

SutDescriptor Collections() {
  SutDescriptor sut;
  sut.id = "collections";
  sut.openapi = std::string(FixtureFile("collections/openapi.yaml"));
  sut.format = DocumentFormat::kYaml;
  sut.routes = {
      {"POST", "/coll/tags", &Tags},         {"GET", "/coll/lookup", &Lookup},
      {"GET", "/coll/color", &Color},        {"GET", "/coll/number", &Number},
      {"POST", "/coll/purge", &Purge},       {"PUT", "/coll/settings", &Settings},
  };
  sut.probes = {"tags:L1",    "tags:L2",     "tags:L3",     "lookup:L1",   "color:L1",
                "color:L2",   "number:L1",   "number:L2",   "number:L3",   "purge:L1",
                "purge:L2",   "settings:L1", "settings:L2", "settings:L3"};
  return sut;
}

}  // namespace wbfuzz::fixtures
