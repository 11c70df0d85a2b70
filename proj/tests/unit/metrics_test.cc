#include "storagelab/metrics.h"

#include <gtest/gtest.h>

namespace storagelab {
namespace {

CookieFlowRecord Flow(std::string profile, int64_t iter, int64_t seq,
                      std::string top, std::string tp, std::string name,
                      std::string value) {
  return {std::move(profile), iter,          seq,
          std::move(top),     std::move(tp), std::move(name),
          std::move(value)};
}

TEST(CharacterCountTest, CountsCodePoints) {
  EXPECT_EQ(CharacterCount("abcdefgh"), 8u);
  EXPECT_EQ(CharacterCount("\xc3\xa9\xc3\xa9"), 2u);  // two e-acute
  EXPECT_EQ(CharacterCount(""), 0u);
}

TEST(ExtractPicfsTest, ThresholdAndUniqueness) {
  const std::vector<CookieFlowRecord> flows = {
      Flow("p1", 1, 1, "a.com", "t.net", "uid", "12345678"),     // qualifies
      Flow("p1", 1, 1, "a.com", "t.net", "short", "1234567"),    // too short
      Flow("p1", 1, 1, "a.com", "t.net", "lang", "en-US-long"),  // shared
      Flow("p2", 1, 1, "a.com", "u.net", "lang", "en-US-long"),
  };
  const std::set<Picf> picfs = ExtractPicfs(flows);
  ASSERT_EQ(picfs.size(), 1u);
  EXPECT_EQ(picfs.begin()->cookie_value, "12345678");
  EXPECT_EQ(picfs.begin()->owning_profile, "p1");
  EXPECT_EQ(ExtractPicfs(flows, 7).size(), 2u);
}

TEST(CrossSiteScoresTest, CountsDistinctTopSites) {
  const std::vector<CookieFlowRecord> flows = {
      Flow("p1", 1, 1, "a.com", "t.net", "uid", "idididid1"),
      Flow("p1", 1, 2, "b.com", "t.net", "uid", "idididid1"),
      Flow("p1", 1, 3, "c.com", "t.net", "uid", "idididid1"),
      Flow("p1", 1, 3, "c.com", "t.net", "uid", "idididid1"),
      // Only ever seen on one site: no cross-site evidence by default.
      Flow("p1", 1, 1, "a.com", "u.net", "uid", "solo-value"),
  };
  const std::set<Picf> picfs = ExtractPicfs(flows);
  const Scores scores = CrossSiteScores(picfs, flows);
  EXPECT_EQ(scores, (Scores{{"t.net", 3}}));
  const Scores literal = CrossSiteScores(picfs, flows, CrossSiteOptions{1});
  EXPECT_EQ(literal, (Scores{{"t.net", 3}, {"u.net", 1}}));
}

TEST(CrossSiteScoresTest, NoPicfsNoScores) {
  EXPECT_TRUE(CrossSiteScores({}, {}).empty());
}

TEST(CrossTimeScoresTest, Modes) {
  const std::vector<CookieFlowRecord> flows = {
      // Same value on two visits in one iteration.
      Flow("p1", 1, 1, "a.com", "t.net", "uid", "idididid1"),
      Flow("p1", 1, 2, "a.com", "t.net", "uid", "idididid1"),
      // Same value across iterations.
      Flow("p1", 1, 1, "a.com", "u.net", "uid", "uuuuuuuu1"),
      Flow("p1", 2, 5, "a.com", "u.net", "uid", "uuuuuuuu1"),
      // Seen once only.
      Flow("p1", 1, 3, "b.com", "t.net", "uid", "once-only"),
  };
  const std::set<Picf> picfs = ExtractPicfs(flows);
  EXPECT_EQ(CrossTimeScores(picfs, flows),
            (Scores{{"a.com", 2}, {"b.com", 0}}));
  EXPECT_EQ(CrossTimeScores(picfs, flows, CrossTimeMode::kAcrossIterations),
            (Scores{{"a.com", 1}, {"b.com", 0}}));
}

TEST(CumulativeCurveTest, SortsDescendingWithKeyTieBreak) {
  const Scores scores = {{"b", 2}, {"a", 2}, {"c", 5}, {"d", 0}};
  const std::vector<CumulativePoint> curve = CumulativeCurve(scores);
  EXPECT_EQ(curve,
            (std::vector<CumulativePoint>{{1, 5}, {2, 7}, {3, 9}, {4, 9}}));
  EXPECT_TRUE(CumulativeCurve({}).empty());
}

// Steps are non-negative and non-increasing, and the curve ends at the total.
TEST(CumulativeCurveTest, MonotoneAndEndsAtTotal) {
  Scores scores;
  for (int i = 0; i < 50; ++i) scores["k" + std::to_string(i)] = (i * 37) % 11;
  const auto curve = CumulativeCurve(scores);
  int64_t previous_sum = 0;
  int64_t previous_step = curve.front().cumulative_sum;
  for (const CumulativePoint& point : curve) {
    const int64_t step = point.cumulative_sum - previous_sum;
    EXPECT_GE(step, 0);
    EXPECT_LE(step, previous_step);
    previous_sum = point.cumulative_sum;
    previous_step = step;
  }
  EXPECT_EQ(curve.back().cumulative_sum, Total(scores));
}

TEST(HarmonicMeanTest, ExactRational) {
  EXPECT_EQ(HarmonicMean(10, 5), MakeRational(20, 3));
  EXPECT_EQ(HarmonicMean(0, 0), 0);
  EXPECT_EQ(HarmonicMean(4, 4), 4);
}

TEST(SelectCandidatesTest, DistinctSitesByHarmonicMean) {
  const std::vector<FrameStat> stats = {
      {"https://a.tracker.net/w", 10, 10},  // 10
      {"https://b.tracker.net/w", 20, 20},  // 20, same site as above
      {"https://other.org/f", 30, 6},       // 10
      {"https://zzz.com/f", 1, 1},          // 1
  };
  const CandidateSelection top2 =
      SelectCandidates(stats, 2, SuffixRuleSet::Builtin());
  EXPECT_EQ(top2.frame_urls,
            (std::vector<std::string>{"https://b.tracker.net/w",
                                      "https://other.org/f"}));
  EXPECT_EQ(top2.scores[0], 20);
  EXPECT_FALSE(top2.short_of_k);
  const CandidateSelection all =
      SelectCandidates(stats, 5, SuffixRuleSet::Builtin());
  EXPECT_EQ(all.frame_urls.size(), 3u);
  EXPECT_TRUE(all.short_of_k);
}

TEST(SelectCandidatesTest, TiesBrokenByUrl) {
  const std::vector<FrameStat> stats = {{"https://b.net/", 3, 3},
                                        {"https://a.net/", 3, 3}};
  const CandidateSelection s =
      SelectCandidates(stats, 1, SuffixRuleSet::Builtin());
  EXPECT_EQ(s.frame_urls, (std::vector<std::string>{"https://a.net/"}));
}

TEST(FrameStatsFromOutputTest, CountsPagesAndCookies) {
  SimOutput out;
  out.frames[{"https://a.com/", "https://t.net/w", "p1", 1}] = {
      {}, false, Party::kThird};
  out.frames[{"https://b.com/", "https://t.net/w", "p1", 1}] = {
      {}, false, Party::kThird};
  out.frames[{"https://b.com/", "https://t.net/w", "p2", 1}] = {
      {}, false, Party::kThird};
  out.frames[{"https://b.com/", "https://ad.net/", "p1", 1}] = {
      {}, true, Party::kThird};
  out.frames[{"https://b.com/", "https://b.com/", "p1", 1}] = {
      {}, false, Party::kFirst};
  out.flows = {Flow("p1", 1, 1, "a.com", "t.net", "uid", "1"),
               Flow("p1", 1, 2, "b.com", "t.net", "uid", "1"),
               Flow("p2", 1, 1, "b.com", "t.net", "uid", "2")};
  const std::vector<FrameStat> stats =
      FrameStatsFromOutput(out, SuffixRuleSet::Builtin());
  ASSERT_EQ(stats.size(), 1u);
  EXPECT_EQ(stats[0].frame_url, "https://t.net/w");
  EXPECT_EQ(stats[0].n_embedding_pages, 2);
  EXPECT_EQ(stats[0].n_cookies, 2);
}

}  // namespace
}  // namespace storagelab
