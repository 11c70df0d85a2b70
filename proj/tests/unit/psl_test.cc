#include "storagelab/psl.h"

#include <gtest/gtest.h>

#include "psl_vectors.h"

namespace storagelab {
namespace {

TEST(PslConformanceTest, PublicSuffixOrgVectors) {
  const SuffixRuleSet& rules = SuffixRuleSet::Builtin();
  ASSERT_GE(testing::PslConformanceVectors().size(), 40u);
  for (const testing::PslVector& v : testing::PslConformanceVectors()) {
    const std::optional<std::string> got =
        testing::RegistrableDomain(v.input, rules);
    if (v.expected == nullptr) {
      EXPECT_FALSE(got.has_value()) << v.input << " -> " << got.value_or("");
    } else {
      EXPECT_EQ(got.value_or("<null>"), v.expected) << v.input;
    }
  }
}

TEST(ParsePslTest, ClassifiesRules) {
  absl::StatusOr<SuffixRuleSet> rules = ParsePsl(
      "// comment\n\ncom\n*.kawasaki.jp\n!city.kawasaki.jp\r\n  org  \n");
  ASSERT_TRUE(rules.ok()) << rules.status();
  EXPECT_TRUE(rules->normal_rules().contains("com"));
  EXPECT_TRUE(rules->normal_rules().contains("org"));
  EXPECT_TRUE(rules->wildcard_rules().contains("kawasaki.jp"));
  EXPECT_TRUE(rules->exception_rules().contains("city.kawasaki.jp"));
  EXPECT_EQ(rules->size(), 4u);
}

TEST(ParsePslTest, RejectsWhitespaceInsideRule) {
  absl::StatusOr<SuffixRuleSet> rules = ParsePsl("com\nbad rule\n");
  ASSERT_FALSE(rules.ok());
  EXPECT_NE(std::string(rules.status().message()).find("line 2"),
            std::string::npos);
}

TEST(PublicSuffixTest, DefaultRuleIsLastLabel) {
  absl::StatusOr<std::string> suffix =
      PublicSuffix("foo.unlisted", SuffixRuleSet::Builtin());
  ASSERT_TRUE(suffix.ok());
  EXPECT_EQ(*suffix, "unlisted");
}

TEST(PublicSuffixTest, EmptyRuleSetStillAppliesDefault) {
  SuffixRuleSet empty;
  absl::StatusOr<std::optional<std::string>> site =
      EtldPlusOne("a.b.example.com", empty);
  ASSERT_TRUE(site.ok());
  EXPECT_EQ(site->value_or(""), "example.com");
}

TEST(EtldPlusOneTest, ErrorsOnEmptyLabels) {
  EXPECT_FALSE(EtldPlusOne("", SuffixRuleSet::Builtin()).ok());
  EXPECT_FALSE(EtldPlusOne("a..com", SuffixRuleSet::Builtin()).ok());
}

TEST(EtldPlusOneTest, IpAddressIsItsOwnSite) {
  absl::StatusOr<std::optional<std::string>> site =
      EtldPlusOne("10.0.0.1", SuffixRuleSet::Builtin());
  ASSERT_TRUE(site.ok());
  EXPECT_EQ(site->value_or(""), "10.0.0.1");
}

TEST(SiteForHostTest, FallsBackToHost) {
  EXPECT_EQ(SiteForHost("com", SuffixRuleSet::Builtin()), "com");
  EXPECT_EQ(SiteForHost("x.y.github.io", SuffixRuleSet::Builtin()),
            "y.github.io");
}

// Appending labels never changes the registrable domain of a host that
// already has one, as long as no new rule matches.
TEST(EtldPlusOneTest, StableUnderSubdomains) {
  const SuffixRuleSet& rules = SuffixRuleSet::Builtin();
  for (const char* host : {"example.com", "example.co.uk", "b.c.kobe.jp",
                           "city.kobe.jp", "test.k12.ak.us"}) {
    const auto base = testing::RegistrableDomain(host, rules);
    ASSERT_TRUE(base.has_value()) << host;
    std::string deeper = host;
    for (int i = 0; i < 4; ++i) {
      deeper = "l" + std::to_string(i) + "." + deeper;
      EXPECT_EQ(testing::RegistrableDomain(deeper, rules), base) << deeper;
    }
  }
}

}  // namespace
}  // namespace storagelab
