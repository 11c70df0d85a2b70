#ifndef STORAGELAB_METRICS_H_
#define STORAGELAB_METRICS_H_

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "storagelab/psl.h"
#include "storagelab/rational.h"
#include "storagelab/simulator.h"

namespace storagelab {

inline constexpr int kDefaultPicfThreshold = 8;

// Potentially identifying cookie flow: a (cookie, receiving third party)
// whose value is long enough and was only ever seen in one profile.
struct Picf {
  std::string cookie_name;
  std::string cookie_value;
  std::string third_party_site;
  std::string owning_profile;
  friend auto operator<=>(const Picf&, const Picf&) = default;
};

// Number of UTF-8 code points in `text`.
size_t CharacterCount(std::string_view text);

// A flow's (name, value, third party) qualifies iff the value has at least
// `threshold` characters and occurs, under any cookie name or receiver, in
// exactly one profile of `flows`.
std::set<Picf> ExtractPicfs(std::span<const CookieFlowRecord> flows,
                            int threshold = kDefaultPicfThreshold);

using Scores = std::map<std::string, int64_t>;

struct CrossSiteOptions {
  // A PICF demonstrates cross-site tracking potential only when it was
  // transmitted on at least this many distinct top-level sites.
  int min_sites = 2;
};

// third_party_site -> number of distinct top-level sites on which any of its
// qualifying PICFs was transmitted. Third parties with none are absent.
Scores CrossSiteScores(const std::set<Picf>& picfs,
                       std::span<const CookieFlowRecord> flows,
                       const CrossSiteOptions& options = {});

enum class CrossTimeMode {
  kAnyVisits,        // two distinct visits of the top site
  kAcrossIterations  // visits in two distinct crawl iterations
};

// top_site -> number of third parties with some identical PICF observed in at
// least two distinct visits of that top site. Every top site present in
// `flows` appears, possibly with 0.
Scores CrossTimeScores(const std::set<Picf>& picfs,
                       std::span<const CookieFlowRecord> flows,
                       CrossTimeMode mode = CrossTimeMode::kAnyVisits);

int64_t Total(const Scores& scores);

struct CumulativePoint {
  int64_t rank = 0;  // 1-based
  int64_t cumulative_sum = 0;
  friend bool operator==(const CumulativePoint&,
                         const CumulativePoint&) = default;
};

// Keys by descending score, ties by key; running sum.
std::vector<CumulativePoint> CumulativeCurve(const Scores& scores);

struct FrameStat {
  std::string frame_url;
  int64_t n_embedding_pages = 0;
  int64_t n_cookies = 0;
};

// Third-party, non-ad frames of `output`. Pages are counted by distinct page
// URL; cookies by distinct (name, value) transmitted to the frame's site.
std::vector<FrameStat> FrameStatsFromOutput(const SimOutput& output,
                                            const SuffixRuleSet& rules);

// 2ab / (a + b), 0 when a + b == 0.
Rational HarmonicMean(int64_t a, int64_t b);

struct CandidateSelection {
  std::vector<std::string> frame_urls;
  std::vector<Rational> scores;
  bool short_of_k = false;  // fewer than k distinct sites were available
};

// Sorts by harmonic mean of (embedding pages, cookies), descending with ties
// by frame URL, and keeps the first frame per eTLD+1 until k are chosen.
CandidateSelection SelectCandidates(std::span<const FrameStat> stats, size_t k,
                                    const SuffixRuleSet& rules);

}  // namespace storagelab

#endif  // STORAGELAB_METRICS_H_
