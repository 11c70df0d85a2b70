#include "storagelab/similarity.h"

#include <algorithm>
#include <map>
#include <thread>

#include "absl/status/status.h"

namespace storagelab {
namespace {

// Type mask of an edge: the set of its endpoint types. Undecodable edges get
// every type, so only the all-types filter retains them.
uint16_t EdgeMask(std::string_view edge) {
  absl::StatusOr<std::pair<NodeType, NodeType>> types =
      CanonicalEdgeTypes(edge);
  if (!types.ok()) return NodeTypeSet::All().bits();
  return NodeTypeSet{types->first, types->second}.bits();
}

bool Retained(uint16_t mask, NodeTypeSet filter) {
  return (mask & ~filter.bits()) == 0;
}

bool IsFrameOfInterest(const FrameRecord& record) {
  return record.party == Party::kThird && !record.is_ad;
}

const FrameRecord* FindFrame(const SimOutput& output, const InstanceKey& key,
                             std::string_view profile) {
  auto it = output.frames.find(FrameKey{key.page_url, key.frame_url,
                                        std::string(profile), key.crawl_iter});
  if (it == output.frames.end() || !IsFrameOfInterest(it->second)) {
    return nullptr;
  }
  return &it->second;
}

std::vector<InstanceKey> KeysOfInterest(const SimOutput& output,
                                        std::string_view profile) {
  std::vector<InstanceKey> keys;
  for (const auto& [key, record] : output.frames) {
    if (key.profile != profile || !IsFrameOfInterest(record)) continue;
    keys.push_back({key.page_url, key.frame_url, key.crawl_iter});
  }
  return keys;
}

constexpr uint8_t kInBase = 1;
constexpr uint8_t kInPeer = 2;
constexpr uint8_t kInContrast = 4;

struct CompactEdge {
  uint16_t mask;
  uint8_t membership;
};

std::vector<std::vector<CompactEdge>> Compact(
    std::span<const SampleInstance> sample) {
  std::vector<std::vector<CompactEdge>> compact;
  compact.reserve(sample.size());
  for (const SampleInstance& instance : sample) {
    std::map<std::string_view, uint8_t> membership;
    for (const std::string& e : instance.base) membership[e] |= kInBase;
    for (const std::string& e : instance.peer) membership[e] |= kInPeer;
    for (const std::string& e : instance.contrast) membership[e] |= kInContrast;
    std::vector<CompactEdge> edges;
    edges.reserve(membership.size());
    for (const auto& [edge, bits] : membership) {
      edges.push_back({EdgeMask(edge), bits});
    }
    compact.push_back(std::move(edges));
  }
  return compact;
}

std::optional<Rational> CompactJaccard(const std::vector<CompactEdge>& edges,
                                       NodeTypeSet filter, uint8_t a,
                                       uint8_t b) {
  int64_t intersection = 0;
  int64_t union_size = 0;
  for (const CompactEdge& edge : edges) {
    if (!Retained(edge.mask, filter)) continue;
    const bool in_a = edge.membership & a;
    const bool in_b = edge.membership & b;
    if (in_a && in_b) ++intersection;
    if (in_a || in_b) ++union_size;
  }
  if (union_size == 0) return std::nullopt;
  return Rational(intersection, union_size);
}

std::optional<Rational> CompactSeparation(
    const std::vector<std::vector<CompactEdge>>& compact, NodeTypeSet filter) {
  Rational baseline_sum = 0;
  Rational contrast_sum = 0;
  int64_t baseline_n = 0;
  int64_t contrast_n = 0;
  for (const std::vector<CompactEdge>& edges : compact) {
    if (auto j = CompactJaccard(edges, filter, kInBase, kInPeer)) {
      baseline_sum += *j;
      ++baseline_n;
    }
    if (auto j = CompactJaccard(edges, filter, kInContrast, kInBase)) {
      contrast_sum += *j;
      ++contrast_n;
    }
  }
  if (baseline_n == 0 || contrast_n == 0) return std::nullopt;
  return baseline_sum / baseline_n - contrast_sum / contrast_n;
}

// True if `a` should be preferred over `b` at equal separation.
bool PreferredOnTie(NodeTypeSet a, NodeTypeSet b) {
  if (a.size() != b.size()) return a.size() < b.size();
  const std::vector<NodeType> ta = a.types();
  const std::vector<NodeType> tb = b.types();
  return std::lexicographical_compare(ta.begin(), ta.end(), tb.begin(),
                                      tb.end());
}

}  // namespace

std::optional<Rational> Jaccard(const EdgeSet& a, const EdgeSet& b) {
  if (a.empty() && b.empty()) return std::nullopt;
  int64_t intersection = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++intersection;
      ++ia;
      ++ib;
    }
  }
  const int64_t union_size =
      static_cast<int64_t>(a.size() + b.size()) - intersection;
  return Rational(intersection, union_size);
}

EdgeSet FilterEdges(const EdgeSet& edges, NodeTypeSet filter) {
  EdgeSet out;
  for (const std::string& edge : edges) {
    if (Retained(EdgeMask(edge), filter)) out.insert(out.end(), edge);
  }
  return out;
}

std::vector<InstanceScore> FrameSimilarity(const SimOutput& base,
                                           std::string_view base_profile,
                                           const SimOutput& other,
                                           std::string_view other_profile,
                                           NodeTypeSet filter) {
  std::vector<InstanceScore> scores;
  for (InstanceKey& key : KeysOfInterest(base, base_profile)) {
    const FrameRecord* a = FindFrame(base, key, base_profile);
    const FrameRecord* b = FindFrame(other, key, other_profile);
    if (a == nullptr || b == nullptr) continue;
    scores.push_back({std::move(key), Jaccard(FilterEdges(a->edges, filter),
                                              FilterEdges(b->edges, filter))});
  }
  return scores;
}

std::optional<Rational> MeanDefined(std::span<const InstanceScore> scores) {
  Rational sum = 0;
  int64_t n = 0;
  for (const InstanceScore& s : scores) {
    if (!s.score) continue;
    sum += *s.score;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

std::vector<SimilarityPoint> SimilarityCurve(
    std::span<const InstanceScore> compared,
    std::span<const InstanceScore> baseline) {
  std::map<InstanceKey, bool> baseline_defined;
  for (const InstanceScore& s : baseline) {
    baseline_defined[s.key] = s.score.has_value();
  }
  std::vector<const InstanceScore*> kept;
  for (const InstanceScore& s : compared) {
    auto it = baseline_defined.find(s.key);
    const bool base_ok = it != baseline_defined.end() && it->second;
    if (!s.score && !base_ok) continue;
    kept.push_back(&s);
  }
  std::sort(kept.begin(), kept.end(),
            [](const InstanceScore* a, const InstanceScore* b) {
              return a->key < b->key;
            });
  std::vector<SimilarityPoint> curve;
  curve.reserve(kept.size());
  const int64_t n = static_cast<int64_t>(kept.size());
  Rational running = 0;
  for (int64_t i = 0; i < n; ++i) {
    if (kept[i]->score) running += *kept[i]->score;
    curve.push_back({i + 1, running / n});
  }
  return curve;
}

std::vector<SampleInstance> BuildSample(const SimOutput& base,
                                        std::string_view base_profile,
                                        const SimOutput& peer,
                                        std::string_view peer_profile,
                                        const SimOutput& contrast,
                                        std::string_view contrast_profile) {
  std::vector<SampleInstance> sample;
  for (InstanceKey& key : KeysOfInterest(base, base_profile)) {
    const FrameRecord* b = FindFrame(base, key, base_profile);
    const FrameRecord* p = FindFrame(peer, key, peer_profile);
    const FrameRecord* c = FindFrame(contrast, key, contrast_profile);
    if (b == nullptr || p == nullptr || c == nullptr) continue;
    sample.push_back({std::move(key), b->edges, p->edges, c->edges});
  }
  return sample;
}

std::optional<Rational> Separation(std::span<const SampleInstance> sample,
                                   NodeTypeSet filter) {
  return CompactSeparation(Compact(sample), filter);
}

absl::StatusOr<OptimizationResult> OptimizeNodeTypes(
    std::span<const SampleInstance> sample, int jobs) {
  if (sample.empty()) {
    return absl::InvalidArgumentError("optimization sample is empty");
  }
  const auto compact = Compact(sample);
  const uint32_t n_subsets = NodeTypeSet::All().bits();  // 2^11 - 1
  std::vector<std::optional<Rational>> separations(n_subsets);
  auto evaluate = [&](uint32_t begin, uint32_t end) {
    for (uint32_t i = begin; i < end; ++i) {
      separations[i] =
          CompactSeparation(compact, NodeTypeSet(static_cast<uint16_t>(i + 1)));
    }
  };
  const uint32_t workers =
      static_cast<uint32_t>(std::clamp(jobs, 1, static_cast<int>(n_subsets)));
  if (workers == 1) {
    evaluate(0, n_subsets);
  } else {
    std::vector<std::jthread> threads;
    const uint32_t chunk = (n_subsets + workers - 1) / workers;
    for (uint32_t begin = 0; begin < n_subsets; begin += chunk) {
      threads.emplace_back(evaluate, begin, std::min(n_subsets, begin + chunk));
    }
  }

  OptimizationResult result;
  result.subsets_evaluated = n_subsets;
  bool found = false;
  for (uint32_t i = 0; i < n_subsets; ++i) {
    if (!separations[i]) continue;
    ++result.subsets_defined;
    const NodeTypeSet subset(static_cast<uint16_t>(i + 1));
    const Rational& value = *separations[i];
    if (!found || value > result.separation ||
        (value == result.separation &&
         PreferredOnTie(subset, result.best_subset))) {
      result.best_subset = subset;
      result.separation = value;
      found = true;
    }
  }
  if (!found) {
    return absl::InvalidArgumentError(
        "every similarity score is undefined under every node-type subset");
  }
  return result;
}

}  // namespace storagelab
