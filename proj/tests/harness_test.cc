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


#include "wbfuzz/harness.h"

#include <cstdlib>
#include <regex>

#include "gtest/gtest.h"
#include "wbfuzz/errors.h"
#include "wbfuzz/rng.h"
#include "wbfuzz/taint.h"

namespace wbfuzz {
namespace {

using std::chrono::milliseconds;
using Body = std::function<void(RequestContext&)>;

constexpr char kProbeDoc[] = R"({
  "openapi": "3.0.1",
  "info": {"title": "probe", "version": "1"},
  "paths": {
    "/t": {"get": {
      "parameters": [
        {"name": "known", "in": "query", "schema": {"type": "string"}},
        {"name": "X-Known", "in": "header", "schema": {"type": "string"}}
      ],
      "responses": {"200": {"description": "ok"}}}},
    "/t/{id}": {"post": {
      "parameters": [{"name": "id", "in": "path", "required": true,
                      "schema": {"type": "integer"}}],
      "responses": {"200": {"description": "ok"}}}}
  }
})";

// A SUT whose single handler runs whatever the test installs.
class ProbeSut {
 public:
  explicit ProbeSut(HarnessOptions options = {}) {
    auto sut = std::make_shared<SutDescriptor>();
    sut->id = "probe";
    sut->openapi = kProbeDoc;
    sut->tables = ParseTableSchemas(
        "table item\n column id bigint pk\n column name varchar maxlen 8\nend\n"
        "table tick\n column id bigint pk\n column n integer\nend\n");
    sut->entities = ParseEntities(
        "entity Item table item\n field id\n field name enum A,B\nend\n");
    sut->seed = [](Database& db) { db.Insert("item", Json{{"name", "A"}}); };
    sut->scheduled = {{"ticker", milliseconds(1),
                       [](TaskContext& t) { t.Insert("tick", Json{{"n", 1}}); }}};
    auto body = body_;
    sut->routes = {
        {"GET", "/t",
         [body](RequestContext& ctx) {
           (*body)(ctx);
           return HttpResponse{200, Json()};
         }},
        {"POST", "/t/{id}",
         [body](RequestContext& ctx) {
           (*body)(ctx);
           return HttpResponse{200, Json()};
         }},
    };
    harness_ = std::make_unique<Harness>(sut, options);
  }

  Harness& harness() { return *harness_; }

  ExecutionTrace Run(Body fn, HttpRequest req = {"GET", "/t", {}, {}, {}}) {
    *body_ = std::move(fn);
    harness_->Call(req);
    return harness_->TakeTrace();
  }

 private:
  std::shared_ptr<Body> body_ = std::make_shared<Body>();
  std::unique_ptr<Harness> harness_;
};

// Exactly one of the two outcome targets of `site` is at 1.
void ExpectOneOutcome(const ExecutionTrace& t, const std::string& site, const char* a,
                      const char* b) {
  const double ha = t.heuristics.at("probe:" + site + ":" + a);
  const double hb = t.heuristics.at("probe:" + site + ":" + b);
  EXPECT_GE(ha, 0.0);
  EXPECT_GE(hb, 0.0);
  EXPECT_EQ((ha == 1.0) + (hb == 1.0), 1) << site << " " << ha << " " << hb;
}

std::string RandomText(Rng& rng, std::string_view alphabet, size_t max_len) {
  std::string s;
  const size_t n = rng.Index(max_len + 1);
  for (size_t i = 0; i < n; ++i) s += alphabet[rng.Index(alphabet.size())];
  return s;
}

Element RandomElement(Rng& rng) {
  switch (rng.Index(3)) {
    case 0:
      return Element{rng.Int(0, 5)};
    case 1:
      return Element{RandomText(rng, "ab", 2)};
    default:
      return Element{static_cast<double>(rng.Int(0, 3))};
  }
}

std::vector<Element> RandomElements(Rng& rng, size_t max_len) {
  std::vector<Element> xs;
  const size_t n = rng.Index(max_len + 1);
  for (size_t i = 0; i < n; ++i) xs.push_back(RandomElement(rng));
  return xs;
}

// Plain reference parsers.
std::optional<int64_t> PlainParseInt(const std::string& s) {
  static const std::regex kInt("[+-]?[0-9]+");
  if (!std::regex_match(s, kInt)) return std::nullopt;
  const size_t digits = s.size() - ((s[0] == '+' || s[0] == '-') ? 1 : 0);
  if (digits > 12) return std::nullopt;
  const long long v = std::stoll(s);
  if (v < INT32_MIN || v > INT32_MAX) return std::nullopt;
  return v;
}

std::optional<double> PlainParseFloat(const std::string& s) {
  if (s.empty() || std::isspace(static_cast<unsigned char>(s[0]))) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

constexpr size_t kTransparencyRuns = 10000;

TEST(WrapperTransparencyTest, Strings) {
  ProbeSut sut;
  Rng rng(1);
  size_t equal = 0;
  sut.Run([&](RequestContext& ctx) {
    for (size_t i = 0; i < kTransparencyRuns; ++i) {
      const std::string a = RandomText(rng, "ab%", 3);
      const std::string b = RandomText(rng, "ab%", 3);
      ASSERT_EQ(ctx.StrEquals("eq", a, b), a == b);
      ASSERT_EQ(ctx.StrStartsWith("sw", a, b), a.rfind(b, 0) == 0);
      ASSERT_EQ(ctx.StrContains("ct", a, b), a.find(b) != std::string::npos);
      equal += a == b;
    }
  });
  EXPECT_GT(equal, 100u);
}

TEST(WrapperTransparencyTest, Collections) {
  ProbeSut sut;
  Rng rng(2);
  sut.Run([&](RequestContext& ctx) {
    for (size_t i = 0; i < kTransparencyRuns; ++i) {
      std::vector<Element> xs = RandomElements(rng, 4);
      const std::vector<Element> ys = RandomElements(rng, 3);
      const Element e = RandomElement(rng);
      const auto eq = [](const Element& x) {
        return [&x](const Element& y) { return ElementEquals(x, y); };
      };
      const bool has = std::any_of(xs.begin(), xs.end(), eq(e));
      ASSERT_EQ(ctx.CollContains("c", xs, e), has);
      bool all = true;
      for (const auto& y : ys) all = all && std::any_of(xs.begin(), xs.end(), eq(y));
      ASSERT_EQ(ctx.CollContainsAll("ca", xs, ys), all);
      ASSERT_EQ(ctx.CollIsEmpty("ce", xs), xs.empty());

      std::vector<Element> plain = xs;
      auto it = std::find_if(plain.begin(), plain.end(), eq(e));
      const bool removed = it != plain.end();
      if (removed) plain.erase(it);
      std::vector<Element> tracked = xs;
      ASSERT_EQ(ctx.CollRemove("cr", tracked, e), removed);
      ASSERT_EQ(tracked.size(), plain.size());

      plain = xs;
      const size_t before = plain.size();
      std::erase_if(plain, [&](const Element& x) {
        return std::any_of(ys.begin(), ys.end(), eq(x));
      });
      tracked = xs;
      ASSERT_EQ(ctx.CollRemoveAll("cra", tracked, ys), plain.size() != before);
      ASSERT_EQ(tracked.size(), plain.size());
    }
  });
}

TEST(WrapperTransparencyTest, Maps) {
  ProbeSut sut;
  Rng rng(3);
  sut.Run([&](RequestContext& ctx) {
    for (size_t i = 0; i < kTransparencyRuns; ++i) {
      ElementMap m;
      const size_t n = rng.Index(4);
      for (size_t j = 0; j < n; ++j) {
        m[Element{RandomText(rng, "ab", 2)}] =
            rng.Chance(0.2) ? Element{} : Element{RandomText(rng, "xy", 1)};
      }
      const Element k{RandomText(rng, "ab", 2)};
      const Element v{RandomText(rng, "xy", 1)};
      auto it = m.find(k);
      const bool nonnull = it != m.end() && !std::holds_alternative<std::monostate>(it->second);
      const auto got = ctx.MapGet("g", m, k);
      ASSERT_EQ(got.has_value(), nonnull);
      if (nonnull) ASSERT_EQ(*got, it->second);
      ASSERT_EQ(ctx.MapContainsKey("ck", m, k), it != m.end());
      bool has_value = false;
      for (const auto& [key, value] : m) has_value = has_value || value == v;
      ASSERT_EQ(ctx.MapContainsValue("cv", m, v), has_value);
      const Element fallback{"zz"};
      ASSERT_EQ(ctx.MapGetOrDefault("gd", m, k, fallback), it != m.end() ? it->second : fallback);

      ElementMap plain = m;
      ElementMap tracked = m;
      const bool present = plain.count(k) > 0;
      if (present) plain[k] = v;
      const auto previous = ctx.MapReplace("rp", tracked, k, v);
      ASSERT_EQ(tracked, plain);
      ASSERT_EQ(previous.has_value(), nonnull);
      plain.erase(k);
      ctx.MapRemove("rm", tracked, k);
      ASSERT_EQ(tracked, plain);
    }
  });
}

TEST(WrapperTransparencyTest, EnumsAndEquality) {
  ProbeSut sut;
  Rng rng(4);
  const std::vector<std::string> values = {"TEST", "EVENT", "T"};
  sut.Run([&](RequestContext& ctx) {
    for (size_t i = 0; i < kTransparencyRuns; ++i) {
      const std::string s = RandomText(rng, "TES", 4);
      auto it = std::find(values.begin(), values.end(), s);
      const auto got = ctx.EnumValueOf("e", values, s);
      ASSERT_EQ(got.has_value(), it != values.end());
      if (got) ASSERT_EQ(*got, static_cast<size_t>(it - values.begin()));
      const Element a = RandomElement(rng);
      const Element b = RandomElement(rng);
      ASSERT_EQ(ctx.ObjEquals("o", a, b), ElementEquals(a, b));
    }
  });
}

TEST(WrapperTransparencyTest, Parsers) {
  ProbeSut sut;
  Rng rng(5);
  size_t ints = 0;
  size_t floats = 0;
  sut.Run([&](RequestContext& ctx) {
    for (size_t i = 0; i < kTransparencyRuns; ++i) {
      const std::string s = RandomText(rng, "0123456789+-", 11);
      const auto want = PlainParseInt(s);
      const auto got = ctx.ParseInt("pi", s);
      ASSERT_EQ(got, want) << s;
      ints += want.has_value();
      const std::string f = RandomText(rng, "0123456789.e+-", 8);
      const auto fwant = PlainParseFloat(f);
      const auto fgot = ctx.ParseFloat("pf", f);
      ASSERT_EQ(fgot.has_value(), fwant.has_value()) << f;
      if (fgot) ASSERT_EQ(*fgot, *fwant) << f;
      floats += fwant.has_value();
    }
  });
  EXPECT_GT(ints, 100u);
  EXPECT_GT(floats, 100u);
}

TEST(WrapperTransparencyTest, UuidAndUri) {
  ProbeSut sut;
  Rng rng(6);
  static const std::regex kUuid(
      "[0-9a-fA-F]{8}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{12}");
  static const std::regex kUri(R"([A-Za-z][A-Za-z0-9+.\-]*:[^\s"<>\\^`{|}]+)");
  size_t uuids = 0;
  sut.Run([&](RequestContext& ctx) {
    for (size_t i = 0; i < kTransparencyRuns; ++i) {
      std::string u;
      for (size_t j = 0; j < 36; ++j) {
        const bool dash = j == 8 || j == 13 || j == 18 || j == 23;
        u += dash ? '-' : "0123456789abcdefAF"[rng.Index(18)];
      }
      if (rng.Chance(0.5)) u[rng.Index(36)] = "g-x0"[rng.Index(4)];
      if (rng.Chance(0.1)) u.pop_back();
      const bool want = std::regex_match(u, kUuid);
      ASSERT_EQ(ctx.UuidFromString("u", u).has_value(), want) << u;
      uuids += want;
      const std::string uri = RandomText(rng, "ab1:/ <", 6);
      ASSERT_EQ(ctx.UriParse("r", uri).has_value(), std::regex_match(uri, kUri)) << uri;
    }
  });
  EXPECT_GT(uuids, 100u);
}

TEST(WrapperTransparencyTest, Urls) {
  ProbeSut sut;
  sut.Run([&](RequestContext& ctx) {
    EXPECT_TRUE(ctx.UrlParse("l", "https://example.com/x"));
    EXPECT_TRUE(ctx.UrlParse("l", "HTTP://h"));
    EXPECT_TRUE(ctx.UrlParse("l", "file:/etc/hosts"));
    EXPECT_TRUE(ctx.UrlParse("l", "ftp://h?q"));
    EXPECT_FALSE(ctx.UrlParse("l", "mailto:a@b"));
    EXPECT_FALSE(ctx.UrlParse("l", "http:/h"));
    EXPECT_FALSE(ctx.UrlParse("l", "http:///x"));
    EXPECT_FALSE(ctx.UrlParse("l", "https://a b"));
    EXPECT_FALSE(ctx.UrlParse("l", ""));
  });
}

TEST(WrapperHeuristicTest, ExactlyOneOutcomeAtOne) {
  ProbeSut sut;
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const std::string a = RandomText(rng, "ab", 3);
    const std::string b = RandomText(rng, "ab", 3);
    const Element e = RandomElement(rng);
    const std::vector<Element> xs = RandomElements(rng, 3);
    const std::vector<std::string> names = {"A", "B"};
    ElementMap m = {{Element{"a"}, Element{"x"}}, {Element{"b"}, Element{}}};
    const auto t = sut.Run([&](RequestContext& ctx) {
      ctx.StrEquals("s1", a, b);
      ctx.StrStartsWith("s2", a, b);
      ctx.StrContains("s3", a, b);
      ctx.CollContains("c1", xs, e);
      ctx.CollContainsAll("c2", xs, std::vector<Element>{e});
      ctx.CollIsEmpty("c3", xs);
      ctx.MapGet("m1", m, Element{a});
      ctx.MapContainsKey("m2", m, Element{a});
      ctx.EnumValueOf("e1", names, a);
      ctx.ObjEquals("o1", e, Element{int64_t{1}});
      ctx.ParseInt("p1", a);
      ctx.ParseFloat("p2", b);
      ctx.UuidFromString("p3", a);
      ctx.Compare("n1", static_cast<double>(a.size()), CmpOp::kLe, 1);
    });
    for (const char* site : {"s1", "s2", "s3", "c1", "c2", "c3", "m2", "o1", "n1"}) {
      ExpectOneOutcome(t, site, "true", "false");
    }
    ExpectOneOutcome(t, "m1", "nonnull", "null");
    for (const char* site : {"e1", "p1", "p2", "p3"}) ExpectOneOutcome(t, site, "ok", "error");
    for (const auto& [target, h] : t.heuristics) {
      EXPECT_GE(h, 0.0);
      EXPECT_LE(h, 1.0);
    }
  }
}

TEST(WrapperHeuristicTest, MapGetAbsentKey) {
  ProbeSut sut;
  const ElementMap m = {{Element{"a"}, Element{"1"}}};
  std::optional<Element> got;
  const auto t = sut.Run([&](RequestContext& ctx) { got = ctx.MapGet("g", m, Element{"k"}); });
  EXPECT_FALSE(got);
  EXPECT_LT(t.heuristics.at("probe:g:nonnull"), 1.0);
  EXPECT_EQ(t.heuristics.at("probe:g:null"), 1.0);
}

TEST(WrapperHeuristicTest, EnumValueOfDistance) {
  ProbeSut sut;
  const std::vector<std::string> values = {"TEST", "EVENT"};
  std::optional<size_t> got;
  const auto t = sut.Run([&](RequestContext& ctx) { got = ctx.EnumValueOf("e", values, "TES"); });
  EXPECT_FALSE(got);
  const std::vector<Element> xs = {Element{"TEST"}, Element{"EVENT"}};
  Distance best = Distance::Max();
  for (const auto& x : xs) best = std::min(best, ElementDistance(Element{"TES"}, x));
  EXPECT_DOUBLE_EQ(t.heuristics.at("probe:e:ok"), Scale(best));
  EXPECT_DOUBLE_EQ(t.heuristics.at("probe:e:ok"), Scale(ContainsDistance(Element{"TES"}, xs)));
  EXPECT_EQ(t.heuristics.at("probe:e:error"), 1.0);
}

TEST(WrapperHeuristicTest, ObjEqualsNumeric) {
  ProbeSut sut;
  bool got = true;
  const auto t = sut.Run([&](RequestContext& ctx) {
    got = ctx.ObjEquals("o", Element{int64_t{5}}, Element{int64_t{7}});
  });
  EXPECT_FALSE(got);
  EXPECT_DOUBLE_EQ(t.heuristics.at("probe:o:true"), Scale(Distance::Of(2.0)));
}

TEST(WrapperHeuristicTest, BasicOptionsFlattenAdvancedOps) {
  HarnessOptions options;
  options.advanced = false;
  ProbeSut sut(options);
  const std::vector<Element> xs = {Element{"alpha"}};
  const auto t = sut.Run([&](RequestContext& ctx) {
    ctx.CollContains("c", xs, Element{"alphb"});
    ctx.StrEquals("s", "alphb", "alpha");
  });
  EXPECT_DOUBLE_EQ(t.heuristics.at("probe:c:true"), Scale(Distance::Max()));
  EXPECT_GT(t.heuristics.at("probe:s:true"), Scale(Distance::Max()));
}

TEST(WrapperHeuristicTest, LargeCollectionsSkipDistances) {
  HarnessOptions options;
  options.heuristic_cap = 4;
  ProbeSut sut(options);
  std::vector<Element> xs;
  for (int64_t i = 0; i < 5; ++i) xs.emplace_back(i * 10);
  const auto t = sut.Run([&](RequestContext& ctx) { ctx.CollContains("c", xs, Element{int64_t{1}}); });
  EXPECT_DOUBLE_EQ(t.heuristics.at("probe:c:true"), Scale(Distance::Max()));
}

TEST(TaintTest, SightingsNameTheSpecialization) {
  ProbeSut sut;
  const std::string tainted = TaintedValue{7}.Text();
  const auto t = sut.Run([&](RequestContext& ctx) {
    ctx.StrEquals("s", tainted, "secret");
    ctx.StrEquals("s", tainted, "secret");
    ctx.StrStartsWith("p", tainted, "ORD-");
    ctx.ParseFloat("f", tainted);
    ctx.EnumValueOf("e", std::vector<std::string>{"A", "B"}, tainted);
    ctx.StrEquals("n", "plain", "secret");
  });
  ASSERT_EQ(t.taint.size(), 4u);
  EXPECT_EQ(t.taint[0].taint_id, 7u);
  EXPECT_EQ(t.taint[0].specialization.kind, SpecializationKind::kConstantEquals);
  EXPECT_EQ(t.taint[0].specialization.text, "secret");
  EXPECT_EQ(t.taint[0].specialization.source_target, "probe:s:true");
  EXPECT_EQ(t.taint[1].specialization.kind, SpecializationKind::kConstantPrefix);
  EXPECT_EQ(t.taint[2].specialization.kind, SpecializationKind::kFloatFormat);
  EXPECT_EQ(t.taint[3].specialization.kind, SpecializationKind::kEnumMember);
  EXPECT_EQ(t.taint[3].specialization.values, (std::vector<std::string>{"A", "B"}));
}

TEST(DiscoveryTest, UndeclaredAccessorsAreReported) {
  ProbeSut sut;
  HttpRequest req{"GET", "/t", {{"known", "1"}}, {{"x-known", "v"}}, {}};
  const auto t = sut.Run(
      [&](RequestContext& ctx) {
        EXPECT_EQ(ctx.Param("known"), "1");
        EXPECT_EQ(ctx.Header("X-Known"), "v");
        EXPECT_FALSE(ctx.Param("mc_gross"));
        ctx.Param("mc_gross");
        ctx.Header("X-Extra");
        ctx.Param(std::string(kMethodOverride));
        ctx.BodyValue("user.role");
      },
      req);
  ASSERT_EQ(t.discoveries.size(), 3u);
  EXPECT_EQ(t.discoveries[0].input, (DiscoveredInput{InputLocation::kQuery, "mc_gross"}));
  EXPECT_EQ(t.discoveries[1].input, (DiscoveredInput{InputLocation::kHeader, "X-Extra"}));
  EXPECT_EQ(t.discoveries[2].input, (DiscoveredInput{InputLocation::kBody, "user.role"}));
}

TEST(DiscoveryTest, FakeNamesRevealLookups) {
  ProbeSut sut;
  HttpRequest req{"GET",
                  "/t",
                  {{std::string(kFakeParam), "x"}},
                  {{"X-EMEXTRAHEADER123", "y"}},
                  {}};
  const auto t = sut.Run(
      [&](RequestContext& ctx) {
        const ElementMap params = ctx.ParamMap();
        ctx.MapGet("a", params, Element{"payer_email"});
        ctx.MapGet("b", params, Element{std::string(kMethodOverride)});
        ctx.CollContains("c", ctx.HeaderNames(), Element{"X-Trace-Mode"});
        ctx.StrEquals("d", std::string(kFakeParam), "mode");
      },
      req);
  std::vector<DiscoveredInput> got;
  for (const auto& d : t.discoveries) got.push_back(d.input);
  EXPECT_EQ(got, (std::vector<DiscoveredInput>{{InputLocation::kQuery, "payer_email"},
                                               {InputLocation::kHeader, "X-Trace-Mode"},
                                               {InputLocation::kQuery, "mode"}}));
}

TEST(DiscoveryTest, FakeNamesIgnoredBeyondCap) {
  ProbeSut sut;
  std::vector<Element> big;
  for (int i = 0; i < 17; ++i) big.emplace_back("n" + std::to_string(i));
  big.emplace_back(std::string(kFakeParam));
  const auto t = sut.Run([&](RequestContext& ctx) {
    ctx.CollContains("c", big, Element{"hidden"});
    big.resize(16);
    big.back() = std::string(kFakeParam);
    ctx.CollContains("c", big, Element{"shown"});
  });
  ASSERT_EQ(t.discoveries.size(), 1u);
  EXPECT_EQ(t.discoveries[0].input.name, "shown");
}

TEST(DiscoveryTest, DisabledOptionReportsNothing) {
  HarnessOptions options;
  options.discovery = false;
  ProbeSut sut(options);
  const auto t = sut.Run([&](RequestContext& ctx) { ctx.Param("mc_gross"); });
  EXPECT_TRUE(t.discoveries.empty());
}

DtoShape MinDto() {
  DtoShape shape;
  shape.name = "Dto";
  DtoField a;
  a.name = "a";
  a.type = GeneTemplate::Of(GeneTemplate::Kind::kInteger);
  a.constraints = {ValidationConstraint::Min(5)};
  DtoField b;
  b.name = "b";
  b.type = GeneTemplate::Of(GeneTemplate::Kind::kString);
  b.constraints = {ValidationConstraint::Of(ConstraintKind::kNotNull),
                   ValidationConstraint::Pattern("[a-z]+")};
  shape.fields = {a, b};
  return shape;
}

constexpr char kValidTrue[] = "VALIDATE_GET:/t_Dto_true";
constexpr char kValidFalse[] = "VALIDATE_GET:/t_Dto_false";

TEST(ValidateTest, AllSatisfied) {
  ProbeSut sut;
  bool ok = false;
  const auto t = sut.Run([&](RequestContext& ctx) {
    ok = ctx.Validate(Json{{"a", 7}, {"b", "x"}}, MinDto());
  });
  EXPECT_TRUE(ok);
  EXPECT_EQ(t.heuristics.at(kValidTrue), 1.0);
  EXPECT_LT(t.heuristics.at(kValidFalse), 1.0);
}

TEST(ValidateTest, MinViolatedByTwo) {
  ProbeSut sut;
  bool ok = true;
  const auto t = sut.Run([&](RequestContext& ctx) {
    ok = ctx.Validate(Json{{"a", 3}, {"b", "x"}}, MinDto());
  });
  EXPECT_FALSE(ok);
  EXPECT_NEAR(t.heuristics.at(kValidTrue), 0.4, 1e-12);
  EXPECT_EQ(t.heuristics.at(kValidFalse), 1.0);
}

TEST(ValidateTest, PatternTaintAndBasicOptions) {
  const std::string tainted = TaintedValue{3}.Text();
  {
    ProbeSut sut;
    const auto t = sut.Run([&](RequestContext& ctx) {
      ctx.Validate(Json{{"a", 7}, {"b", tainted}}, MinDto());
    });
    ASSERT_EQ(t.taint.size(), 1u);
    EXPECT_EQ(t.taint[0].specialization.kind, SpecializationKind::kRegexMatch);
    EXPECT_EQ(t.taint[0].specialization.text, "[a-z]+");
    EXPECT_EQ(t.taint[0].specialization.source_target, kValidTrue);
  }
  HarnessOptions options;
  options.advanced = false;
  ProbeSut sut(options);
  bool ok = true;
  const auto t = sut.Run([&](RequestContext& ctx) {
    ok = ctx.Validate(Json{{"a", 3}, {"b", tainted}}, MinDto());
  });
  EXPECT_FALSE(ok);
  EXPECT_TRUE(t.heuristics.empty());
  EXPECT_TRUE(t.taint.empty());
}

TEST(ReadDtoTest, SightingsAndTypeErrors) {
  ProbeSut sut;
  HttpRequest req{"POST", "/t/1", {}, {}, R"({"a": "nope"})"};
  HttpResponse response;
  const auto t = sut.Run([&](RequestContext& ctx) { ctx.ReadDto(MinDto()); }, req);
  ASSERT_EQ(t.dtos.size(), 1u);
  EXPECT_EQ(t.dtos[0].shape.name, "Dto");
  response = sut.harness().Call(req);
  EXPECT_EQ(response.status, 400);
  req.body = "{bad";
  EXPECT_EQ(sut.harness().Call(req).status, 400);
  req.body.reset();
  EXPECT_EQ(sut.harness().Call(req).status, 400);
}

TEST(SleepTest, CapsRequestedDuration) {
  HarnessOptions options;
  options.sleep_cap = milliseconds(30);
  ProbeSut sut(options);
  milliseconds short_sleep{0};
  milliseconds long_sleep{0};
  const auto start = std::chrono::steady_clock::now();
  const auto t = sut.Run([&](RequestContext& ctx) {
    short_sleep = ctx.Sleep(milliseconds(5));
    long_sleep = ctx.Sleep(milliseconds(10000));
  });
  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_EQ(short_sleep, milliseconds(5));
  EXPECT_EQ(long_sleep, milliseconds(30));
  EXPECT_EQ(t.slept, milliseconds(35));
  EXPECT_LT(elapsed, milliseconds(2000));
}

TEST(SleepTest, DefaultCapIsOneSecond) { EXPECT_EQ(HarnessOptions().sleep_cap, milliseconds(1000)); }

TEST(BackgroundTaskTest, KilledAtEvaluationEnd) {
  ProbeSut sut;
  const std::string before = sut.harness().db().Dump();
  const auto start = std::chrono::steady_clock::now();
  const auto t = sut.Run([&](RequestContext& ctx) {
    ctx.Spawn("writer", [](TaskContext& task) {
      task.Sleep(milliseconds(900));
      task.Insert("item", Json{{"name", "B"}});
    });
  });
  EXPECT_LT(std::chrono::steady_clock::now() - start, milliseconds(800));
  EXPECT_EQ(t.background_tasks, (std::vector<std::string>{"writer"}));
  EXPECT_EQ(t.interrupted_tasks, 1u);
  EXPECT_EQ(sut.harness().running_tasks(), 0u);
  EXPECT_EQ(sut.harness().db().Dump(), before);
}

TEST(BackgroundTaskTest, ResetStopsSleepingTasks) {
  ProbeSut sut;
  HttpRequest req{"GET", "/t", {}, {}, {}};
  sut.Run([](RequestContext&) {});
  sut.harness().Call(req);
  sut.harness().SpawnTask("sleeper", [](TaskContext& task) { task.Sleep(milliseconds(1000)); });
  EXPECT_EQ(sut.harness().running_tasks(), 1u);
  sut.harness().Reset();
  EXPECT_EQ(sut.harness().running_tasks(), 0u);
}

TEST(SchedulerTest, DisabledNeverRuns) {
  ProbeSut sut;
  const std::string before = sut.harness().db().Dump();
  std::this_thread::sleep_for(milliseconds(100));
  EXPECT_FALSE(sut.harness().scheduler().enabled());
  EXPECT_EQ(sut.harness().scheduler().executions(), 0u);
  EXPECT_EQ(sut.harness().db().Dump(), before);
}

TEST(SchedulerTest, EnabledRuns) {
  ProbeSut sut;
  sut.harness().scheduler().SetEnabled(true);
  std::this_thread::sleep_for(milliseconds(100));
  sut.harness().scheduler().SetEnabled(false);
  EXPECT_GE(sut.harness().scheduler().executions(), 1u);
  EXPECT_GE(sut.harness().db().Count("tick"), 1u);
}

TEST(DatabaseFacadeTest, EmptySelectsAndEntityCrashes) {
  ProbeSut sut;
  sut.harness().Insert("item", Json{{"name", "XYZ"}});
  HttpResponse response;
  const auto t = sut.Run([&](RequestContext& ctx) {
    EXPECT_TRUE(ctx.Select("tick").empty());
    EXPECT_TRUE(ctx.Select("tick").empty());
    const auto rows = ctx.Select("item");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(ctx.LoadEntity("Item", rows[0])["name"], "A");
    ctx.LoadEntity("Item", rows[1]);
  });
  EXPECT_EQ(t.empty_selects, (std::vector<std::string>{"tick"}));
  ASSERT_EQ(t.entity_crashes.size(), 1u);
  EXPECT_EQ(t.entity_crashes[0].table, "item");
  EXPECT_EQ(t.entity_crashes[0].key, 2);
  EXPECT_NE(t.entity_crashes[0].message.find("EntityParseException"), std::string::npos);
  EXPECT_THROW(sut.Run([](RequestContext& ctx) { ctx.Select("nope"); }), ConfigError);
}

TEST(DatabaseFacadeTest, NullPrimitiveCrashes) {
  auto sut = std::make_shared<SutDescriptor>();
  sut->id = "p";
  sut->openapi = kProbeDoc;
  sut->tables = ParseTableSchemas("table s\n column id bigint pk\n column n integer nullable\nend\n");
  sut->entities = ParseEntities("entity S table s\n field n primitive\nend\n");
  sut->routes = {{"GET", "/t", [](RequestContext& ctx) {
                    for (const auto& row : ctx.Select("s")) ctx.LoadEntity("S", row);
                    return HttpResponse{200, Json()};
                  }}};
  Harness h(sut);
  h.Insert("s", Json{{"n", nullptr}});
  EXPECT_EQ(h.Call(HttpRequest{"GET", "/t", {}, {}, {}}).status, 500);
  EXPECT_EQ(h.TakeTrace().entity_crashes.size(), 1u);
}

TEST(HarnessTest, ResetRestoresBaseline) {
  ProbeSut sut;
  const std::string baseline = sut.harness().baseline().Dump();
  sut.Run([](RequestContext& ctx) { ctx.Insert("item", Json{{"name", "B"}}); });
  EXPECT_NE(sut.harness().db().Dump(), baseline);
  sut.harness().Record("x", 0.5);
  sut.harness().Reset();
  EXPECT_EQ(sut.harness().db().Dump(), baseline);
  EXPECT_TRUE(sut.harness().PeekTrace().Empty());
}

TEST(HarnessTest, RoutingAndErrors) {
  ProbeSut sut;
  EXPECT_EQ(sut.harness().Call({"GET", "/nope", {}, {}, {}}).status, 404);
  EXPECT_EQ(sut.harness().Call({"DELETE", "/t", {}, {}, {}}).status, 405);
  std::string id;
  sut.Run([&](RequestContext& ctx) { id = *ctx.PathParam("id"); },
          HttpRequest{"POST", "/t/a%20b", {}, {}, {}});
  EXPECT_EQ(id, "a b");
  auto s = std::make_shared<SutDescriptor>();
  s->id = "c";
  s->openapi = kProbeDoc;
  s->routes = {{"GET", "/t", [](RequestContext&) -> HttpResponse {
                  throw SutCrash("NullPointerException", "boom");
                }}};
  Harness h(s);
  const HttpResponse r = h.Call({"GET", "/t", {}, {}, {}});
  EXPECT_EQ(r.status, 500);
  EXPECT_EQ(r.body["error"], "NullPointerException: boom");
}

TEST(HarnessTest, TraceIsolationAcrossInterleavedEvaluations) {
  ProbeSut one;
  ProbeSut two;
  const auto a1 = one.Run([](RequestContext& ctx) { ctx.StrEquals("a", "x", "y"); });
  const auto b1 = two.Run([](RequestContext& ctx) { ctx.StrEquals("b", "x", "x"); });
  const auto a2 = one.Run([](RequestContext& ctx) { ctx.StrEquals("a", "x", "y"); });
  const auto b2 = two.Run([](RequestContext& ctx) { ctx.StrEquals("b", "x", "x"); });
  EXPECT_EQ(a1.heuristics, a2.heuristics);
  EXPECT_EQ(b1.heuristics, b2.heuristics);
  EXPECT_EQ(a1.heuristics.count("probe:b:true"), 0u);
  EXPECT_EQ(b1.heuristics.count("probe:a:true"), 0u);
}

TEST(HarnessTest, PercentEncodingRoundTrips) {
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    std::string s;
    for (int j = 0; j < 6; ++j) s += static_cast<char>(rng.Int(1, 255));
    EXPECT_EQ(PercentDecode(PercentEncode(s)), s);
  }
}

TEST(FixturesTest, AllLoad) {
  const auto names = FixtureNames();
  EXPECT_EQ(names, (std::vector<std::string>{"appsession", "clockwork", "collections",
                                             "hiddenparams", "stringops", "validbeans"}));
  for (const auto& name : names) {
    const auto sut = LoadFixture(name);
    EXPECT_EQ(sut->id, name);
    const OpenApiDocument doc = sut->Document();
    for (const auto& route : sut->routes) {
      EXPECT_NE(doc.Find(route.verb, route.path), nullptr) << name << " " << route.path;
    }
    Harness h(sut);
  }
  EXPECT_THROW(LoadFixture("nope"), ConfigError);
}

}  // namespace
}  // namespace wbfuzz
