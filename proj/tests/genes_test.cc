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

#include "wbfuzz/genes.h"

#include <charconv>
#include <functional>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "gene_fuzz.h"
#include "gene_oracles.h"
#include "gtest/gtest.h"
#include "wbfuzz/errors.h"
#include "wbfuzz/gene_template.h"
#include "wbfuzz/regex_gene.h"
#include "wbfuzz/uri_gene.h"

namespace wbfuzz {
namespace {

using testing::IsHostname;
using testing::IsIpv4;
using testing::IsStrictUri;
using testing::IsUuidLayout;

int64_t ParseInt(const std::string& s) {
  int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  EXPECT_EQ(ec, std::errc());
  EXPECT_EQ(p, s.data() + s.size()) << s;
  return v;
}

TEST(SampleTest, IntegerWithinBounds) {
  Rng rng(42);
  auto g = Sample(GeneTemplate::Integer(0, 65535), rng);
  const int64_t v = ParseInt(g->Render());
  EXPECT_GE(v, 0);
  EXPECT_LE(v, 65535);
}

TEST(SampleTest, EnumPhenotype) {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    auto g = Sample(GeneTemplate::Enum({"TEST", "EVENT"}), rng);
    const std::string s = g->Render();
    EXPECT_TRUE(s == "TEST" || s == "EVENT") << s;
  }
}

TEST(SampleTest, UuidLayout) {
  Rng rng(3);
  auto g = Sample(GeneTemplate::Of(GeneTemplate::Kind::kUuid), rng);
  EXPECT_TRUE(IsUuidLayout(g->Render())) << g->Render();
}

TEST(SampleTest, InconsistentBoundsRejected) {
  EXPECT_THROW(BuildGene(GeneTemplate::Integer(10, 5)), ConfigError);
  EXPECT_THROW(BuildGene(GeneTemplate::String(9, 3)), ConfigError);
  EXPECT_THROW(BuildGene(GeneTemplate::Enum({})), ConfigError);
  GeneTemplate f = GeneTemplate::Of(GeneTemplate::Kind::kFloat);
  f.minimum = 2;
  f.maximum = 1;
  EXPECT_THROW(BuildGene(f), ConfigError);
}

TEST(MutateTest, BooleanFlips) {
  BooleanGene g(true);
  Rng rng(1);
  g.Mutate(rng, {});
  EXPECT_EQ(g.Render(), "false");
}

TEST(MutateTest, ChoiceCanSwitch) {
  ChoiceGene g({{"a", EnumGene({"x"})}, {"b", EnumGene({"y"})}, {"c", EnumGene({"z"})}},
               0);
  Rng rng(5);
  bool switched = false;
  for (int i = 0; i < 20; ++i) {
    g.Mutate(rng, {});
    switched = switched || g.active() != 0;
    EXPECT_EQ(g.Render(), g.active_gene().Render());
  }
  EXPECT_TRUE(switched);
}

TEST(MutateTest, ChangesUnlessSingleton) {
  Rng rng(11);
  std::vector<GeneBox> genes = {
      IntegerGene(0, 10),     IntegerGene::Long(),       FloatGene(),
      BooleanGene(),          StringGene(),              EnumGene({"a", "b", "c"}),
      UuidGene(),             UriGene(),                 UriGene(true),
      HostnameGene(),         InetGene(),                RegexGene("[a-c]{2,5}x?"),
  };
  for (auto& g : genes) {
    for (int i = 0; i < 500; ++i) {
      const std::string before = g->Render();
      g->Mutate(rng, {});
      ASSERT_NE(g->Render(), before) << GeneKindName(g->kind());
    }
  }
  IntegerGene single(4, 4);
  single.Mutate(rng, {});
  EXPECT_EQ(single.value(), 4);
  EXPECT_TRUE(single.IsSingleton());
}

TEST(RenderTest, UuidZero) {
  UuidGene g(0, 0);
  EXPECT_EQ(g.Render(), "00000000-0000-0000-0000-000000000000");
  UuidGene minus(-1, -1);
  EXPECT_EQ(minus.Render(), "ffffffff-ffff-ffff-ffff-ffffffffffff");
  UuidGene java(0x123e4567e89b12d3, static_cast<int64_t>(0xa456426614174000ULL));
  EXPECT_EQ(java.Render(), "123e4567-e89b-12d3-a456-426614174000");
}

TEST(RenderTest, UuidMutatesThroughLongChildren) {
  UuidGene g(0, 0);
  ASSERT_EQ(g.ChildCount(), 2u);
  EXPECT_EQ(g.Child(0)->kind(), GeneKind::kLong);
  EXPECT_EQ(g.Child(1)->kind(), GeneKind::kLong);
  Rng rng(2);
  g.Mutate(rng, {});
  EXPECT_TRUE(IsUuidLayout(g.Render()));
  EXPECT_NE(g.Render(), "00000000-0000-0000-0000-000000000000");
}

TEST(RenderTest, HttpTree) {
  UriGene g(UriPartGene::Http("https", "a.b", 8080, "/x"));
  EXPECT_EQ(g.Render(), "https://a.b:8080/x");
  EXPECT_TRUE(IsStrictUri(g.Render()));
  UriGene bare(UriPartGene::Http("http", "example.com", -1, ""));
  EXPECT_EQ(bare.Render(), "http://example.com");
}

TEST(RenderTest, Base64) {
  EXPECT_EQ(Base64Encode("foo"), "Zm9v");
  EXPECT_EQ(Base64Encode("fo"), "Zm8=");
  EXPECT_EQ(Base64Encode("f"), "Zg==");
  EXPECT_EQ(Base64Encode(""), "");
}

TEST(RenderTest, ObjectSkipsAbsentOptionals) {
  ObjectGene obj({{"a", IntegerGene(1, 1)}, {"b", OptionalGene(BooleanGene(true))}});
  EXPECT_EQ(obj.Render(), R"({"a":1})");
  static_cast<OptionalGene*>(obj.Find("b"))->set_present(true);
  EXPECT_EQ(obj.Render(), R"({"a":1,"b":true})");
}

TEST(UriOracleTest, SelfCheck) {
  EXPECT_TRUE(IsStrictUri("data:text/plain;base64,Zm9v"));
  EXPECT_TRUE(IsStrictUri("urn:isbn:0451450523"));
  EXPECT_TRUE(IsStrictUri("file:///tmp/x"));
  EXPECT_TRUE(IsStrictUri("ftp://10.0.0.1:21/a"));
  EXPECT_FALSE(IsStrictUri("http://"));
  EXPECT_FALSE(IsStrictUri("http://a b"));
  EXPECT_FALSE(IsStrictUri("http://a.b:70000"));
  EXPECT_FALSE(IsStrictUri("1http://a"));
  EXPECT_FALSE(IsStrictUri("no-scheme"));
  EXPECT_FALSE(IsStrictUri("data:text/plain,a%2"));
  EXPECT_FALSE(IsStrictUri("http://-a.b"));
}

TEST(RegexGeneTest, AlwaysMatches) {
  const std::vector<std::string> patterns = {
      "[a-z]+\\d{2}", "(foo|bar)+baz?", "\\w{3,6}@\\w+\\.com", "[^a-z]{1,3}",
      "a.c", "x*", "(ab|cd){2}[0-9]?", "\\d{4}-\\d{2}-\\d{2}", "^[A-Z][a-z]*$",
      "[\\-+]?\\d+(\\.\\d+)?",
  };
  Rng rng(9);
  for (const auto& p : patterns) {
    RegexGene g(p);
    std::string stripped = p;
    if (!stripped.empty() && stripped.front() == '^') stripped.erase(0, 1);
    if (!stripped.empty() && stripped.back() == '$') stripped.pop_back();
    const std::regex re(stripped);
    for (int i = 0; i < 300; ++i) {
      if (i % 10 == 0) {
        g.Randomize(rng, {});
      } else {
        g.Mutate(rng, {});
      }
      ASSERT_TRUE(std::regex_match(g.Render(), re)) << p << " -> " << g.Render();
      ASSERT_TRUE(g.IsValid());
    }
  }
}

TEST(RegexGeneTest, UnsupportedConstructs) {
  EXPECT_THROW(RegexGene("(?=x)"), ParseError);
  EXPECT_THROW(RegexGene("a{2"), ParseError);
  EXPECT_THROW(RegexGene("(ab"), ParseError);
  EXPECT_THROW(RegexGene("\\1"), ParseError);
}

TEST(StringGeneTest, TaintOnSampling) {
  TaintMinter minter;
  GeneContext ctx{&minter, 1.0};
  Rng rng(4);
  StringGene g;
  g.Randomize(rng, ctx);
  ASSERT_TRUE(g.TaintId().has_value());
  EXPECT_EQ(*g.TaintId(), 0u);
  EXPECT_TRUE(g.IsValid());
  StringGene tiny(0, 4);
  tiny.Randomize(rng, ctx);
  EXPECT_FALSE(tiny.TaintId().has_value());
}

TEST(StringGeneTest, TaintRate) {
  TaintMinter minter;
  GeneContext ctx{&minter, 0.9};
  Rng rng(77);
  int tainted = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    StringGene g;
    g.Randomize(rng, ctx);
    tainted += g.TaintId().has_value();
  }
  const double sigma = std::sqrt(n * 0.9 * 0.1);
  EXPECT_NEAR(tainted, n * 0.9, 3 * sigma);
}

TEST(StringGeneTest, SpecializationsRenderExactly) {
  Rng rng(6);
  StringGene g;
  const std::string constant(60, 'Q');
  Specialization eq{SpecializationKind::kConstantEquals, constant, {}, "t"};
  ASSERT_TRUE(g.AddSpecialization(eq, rng));
  EXPECT_EQ(g.Render(), constant);
  EXPECT_FALSE(g.AddSpecialization(eq, rng));
  Specialization en{SpecializationKind::kEnumMember, "", {"TEST", "EVENT"}, "t"};
  ASSERT_TRUE(g.AddSpecialization(en, rng));
  for (int i = 0; i < 20; ++i) {
    g.Randomize(rng, {});
    if (g.active() == 1) {
      EXPECT_TRUE(g.Render() == "TEST" || g.Render() == "EVENT");
    }
  }
  Specialization uuid{SpecializationKind::kUuidFormat, "", {}, "t"};
  ASSERT_TRUE(g.AddSpecialization(uuid, rng));
  EXPECT_EQ(g.Child(2)->kind(), GeneKind::kUuid);
  EXPECT_TRUE(IsUuidLayout(g.Render()));
  Specialization bad{SpecializationKind::kRegexMatch, "(?<=x)", {}, "t"};
  EXPECT_FALSE(g.AddSpecialization(bad, rng));
}

TEST(GeneTreeTest, PathsAreStable) {
  ObjectGene obj({{"user", ObjectGene({{"name", StringGene()}})},
                  {"tags", ArrayGene(StringGene(), 2, 2)}});
  std::vector<std::string> paths;
  VisitGenes(obj, [&](const std::string& p, Gene&) { paths.push_back(p); });
  EXPECT_EQ(paths, (std::vector<std::string>{"", "user", "user/name", "tags", "tags/0",
                                            "tags/1"}));
  Rng rng(1);
  obj.Randomize(rng, {});
  ObjectGene copy = obj;
  Gene* name = FindGene(copy, "user/name");
  ASSERT_NE(name, nullptr);
  EXPECT_EQ(name->kind(), GeneKind::kString);
  EXPECT_NE(FindGene(copy, "tags/1"), nullptr);
  EXPECT_EQ(FindGene(copy, "user/missing"), nullptr);
}

// Every phenotype passes its independent validity check after sampling
// and after every mutation.
TEST(GeneFuzzTest, AllKindsStayValid) {
  std::set<GeneKind> kinds;
  for (auto& c : testing::AllGeneFuzzCases()) {
    kinds.insert(c.gene->kind());
    const auto failure = testing::FuzzGene(c, 10000);
    EXPECT_FALSE(failure.has_value()) << *failure;
  }
  EXPECT_EQ(kinds.size(), 18u);
}

TEST(GeneTemplateTest, BuiltGenesConform) {
  GeneTemplate body = GeneTemplate::Of(GeneTemplate::Kind::kObject);
  body.fields.push_back({"firstName", GeneTemplate::String(1, 10), true});
  body.fields.push_back({"age", GeneTemplate::Integer(0, 150), false});
  body.fields.push_back({"kind", GeneTemplate::Enum({"TEST", "EVENT"}), true});
  body.fields.push_back({"id", GeneTemplate::Of(GeneTemplate::Kind::kUuid), true});
  GeneTemplate tags = GeneTemplate::Array(GeneTemplate::Of(GeneTemplate::Kind::kBoolean));
  tags.max_items = 3;
  body.fields.push_back({"tags", tags, false});
  GeneTemplate code = GeneTemplate::String(0, 20);
  code.pattern = "[A-Z]{3}\\d";
  body.fields.push_back({"code", code, true});
  Rng rng(21);
  for (int i = 0; i < 2000; ++i) {
    auto g = Sample(body, rng);
    for (int m = 0; m < 3; ++m) g->Mutate(rng, {});
    ASSERT_TRUE(Conforms(body, g->ToJson())) << g->Render();
  }
}

TEST(GeneTemplateTest, PatternBecomesActiveSpecialization) {
  GeneTemplate code = GeneTemplate::String(0, 20);
  code.pattern = "[A-Z]{3}\\d";
  auto g = BuildGene(code);
  ASSERT_EQ(g->kind(), GeneKind::kString);
  EXPECT_EQ(g->ChildCount(), 1u);
  EXPECT_TRUE(std::regex_match(g->Render(), std::regex("[A-Z]{3}\\d")));
}

TEST(GeneTemplateTest, ConformsRejects) {
  EXPECT_FALSE(Conforms(GeneTemplate::Integer(0, 10), 11));
  EXPECT_FALSE(Conforms(GeneTemplate::Integer(0, 10), "5"));
  EXPECT_FALSE(Conforms(GeneTemplate::Enum({"A"}), "B"));
  GeneTemplate obj = GeneTemplate::Of(GeneTemplate::Kind::kObject);
  obj.fields.push_back({"x", GeneTemplate::Integer(), true});
  EXPECT_FALSE(Conforms(obj, Json::object()));
  EXPECT_TRUE(Conforms(obj, Json{{"x", 1}}));
}

}  // namespace
}  // namespace wbfuzz
