#include "storagelab/metrics.h"

#include <algorithm>
#include <tuple>

namespace storagelab {
namespace {

using PicfIdentity = std::tuple<std::string, std::string, std::string>;

PicfIdentity IdentityOf(const CookieFlowRecord& flow) {
  return {flow.cookie_name, flow.cookie_value, flow.third_party_site};
}

std::set<PicfIdentity> Identities(const std::set<Picf>& picfs) {
  std::set<PicfIdentity> out;
  for (const Picf& picf : picfs) {
    out.emplace(picf.cookie_name, picf.cookie_value, picf.third_party_site);
  }
  return out;
}

}  // namespace

size_t CharacterCount(std::string_view text) {
  size_t count = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++count;
  }
  return count;
}

std::set<Picf> ExtractPicfs(std::span<const CookieFlowRecord> flows,
                            int threshold) {
  std::map<std::string, std::set<std::string>> profiles_by_value;
  for (const CookieFlowRecord& flow : flows) {
    profiles_by_value[flow.cookie_value].insert(flow.profile);
  }
  std::set<Picf> picfs;
  for (const CookieFlowRecord& flow : flows) {
    if (CharacterCount(flow.cookie_value) < static_cast<size_t>(threshold)) {
      continue;
    }
    if (profiles_by_value[flow.cookie_value].size() != 1) continue;
    picfs.insert(Picf{flow.cookie_name, flow.cookie_value,
                      flow.third_party_site, flow.profile});
  }
  return picfs;
}

Scores CrossSiteScores(const std::set<Picf>& picfs,
                       std::span<const CookieFlowRecord> flows,
                       const CrossSiteOptions& options) {
  const std::set<PicfIdentity> identities = Identities(picfs);
  std::map<PicfIdentity, std::set<std::string>> sites_by_picf;
  for (const CookieFlowRecord& flow : flows) {
    PicfIdentity identity = IdentityOf(flow);
    if (identities.contains(identity)) {
      sites_by_picf[std::move(identity)].insert(flow.top_site);
    }
  }
  std::map<std::string, std::set<std::string>> sites_by_third_party;
  for (const auto& [identity, sites] : sites_by_picf) {
    if (sites.size() < static_cast<size_t>(std::max(options.min_sites, 1))) {
      continue;
    }
    sites_by_third_party[std::get<2>(identity)].insert(sites.begin(),
                                                       sites.end());
  }
  Scores scores;
  for (const auto& [third_party, sites] : sites_by_third_party) {
    scores[third_party] = static_cast<int64_t>(sites.size());
  }
  return scores;
}

Scores CrossTimeScores(const std::set<Picf>& picfs,
                       std::span<const CookieFlowRecord> flows,
                       CrossTimeMode mode) {
  const std::set<PicfIdentity> identities = Identities(picfs);
  using Visit = std::tuple<std::string, int64_t, int64_t>;
  std::map<std::pair<std::string, PicfIdentity>, std::set<Visit>> visits;
  Scores scores;
  for (const CookieFlowRecord& flow : flows) {
    scores.try_emplace(flow.top_site, 0);
    PicfIdentity identity = IdentityOf(flow);
    if (!identities.contains(identity)) continue;
    Visit visit = mode == CrossTimeMode::kAnyVisits
                      ? Visit{flow.profile, flow.crawl_iter, flow.visit_seq}
                      : Visit{flow.profile, flow.crawl_iter, 0};
    visits[{flow.top_site, std::move(identity)}].insert(std::move(visit));
  }
  std::map<std::string, std::set<std::string>> trackers_by_site;
  for (const auto& [site_and_picf, seen] : visits) {
    if (seen.size() >= 2) {
      trackers_by_site[site_and_picf.first].insert(
          std::get<2>(site_and_picf.second));
    }
  }
  for (const auto& [site, trackers] : trackers_by_site) {
    scores[site] = static_cast<int64_t>(trackers.size());
  }
  return scores;
}

int64_t Total(const Scores& scores) {
  int64_t total = 0;
  for (const auto& [key, score] : scores) total += score;
  return total;
}

std::vector<CumulativePoint> CumulativeCurve(const Scores& scores) {
  std::vector<std::pair<std::string, int64_t>> sorted(scores.begin(),
                                                      scores.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  std::vector<CumulativePoint> curve;
  curve.reserve(sorted.size());
  int64_t running = 0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    running += sorted[i].second;
    curve.push_back({static_cast<int64_t>(i + 1), running});
  }
  return curve;
}

std::vector<FrameStat> FrameStatsFromOutput(const SimOutput& output,
                                            const SuffixRuleSet& rules) {
  std::map<std::string, std::set<std::string>> pages_by_frame;
  for (const auto& [key, record] : output.frames) {
    if (record.party != Party::kThird || record.is_ad) continue;
    pages_by_frame[key.frame_url].insert(key.page_url);
  }
  std::map<std::string, std::set<std::pair<std::string, std::string>>>
      cookies_by_site;
  for (const CookieFlowRecord& flow : output.flows) {
    cookies_by_site[flow.third_party_site].emplace(flow.cookie_name,
                                                   flow.cookie_value);
  }
  std::vector<FrameStat> stats;
  for (const auto& [frame_url, pages] : pages_by_frame) {
    FrameStat stat;
    stat.frame_url = frame_url;
    stat.n_embedding_pages = static_cast<int64_t>(pages.size());
    if (absl::StatusOr<Url> url = ParseUrl(frame_url); url.ok()) {
      auto it = cookies_by_site.find(SiteForHost(url->host, rules));
      if (it != cookies_by_site.end()) {
        stat.n_cookies = static_cast<int64_t>(it->second.size());
      }
    }
    stats.push_back(std::move(stat));
  }
  return stats;
}

Rational HarmonicMean(int64_t a, int64_t b) {
  if (a + b == 0) return Rational(0);
  return Rational(2 * a * b, a + b);
}

CandidateSelection SelectCandidates(std::span<const FrameStat> stats, size_t k,
                                    const SuffixRuleSet& rules) {
  std::vector<std::pair<Rational, const FrameStat*>> ranked;
  ranked.reserve(stats.size());
  for (const FrameStat& stat : stats) {
    ranked.emplace_back(HarmonicMean(stat.n_embedding_pages, stat.n_cookies),
                        &stat);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) {
                     if (a.first != b.first) return a.first > b.first;
                     return a.second->frame_url < b.second->frame_url;
                   });
  CandidateSelection selection;
  std::set<std::string> seen_sites;
  for (const auto& [score, stat] : ranked) {
    if (selection.frame_urls.size() >= k) break;
    absl::StatusOr<Url> url = ParseUrl(stat->frame_url);
    const std::string site =
        url.ok() ? SiteForHost(url->host, rules) : stat->frame_url;
    if (!seen_sites.insert(site).second) continue;
    selection.frame_urls.push_back(stat->frame_url);
    selection.scores.push_back(score);
  }
  selection.short_of_k = selection.frame_urls.size() < k;
  return selection;
}

}  // namespace storagelab
