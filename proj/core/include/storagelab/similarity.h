#ifndef STORAGELAB_SIMILARITY_H_
#define STORAGELAB_SIMILARITY_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "storagelab/rational.h"
#include "storagelab/simulator.h"
#include "storagelab/trace.h"

namespace storagelab {

using EdgeSet = std::set<std::string>;

// |a ∩ b| / |a ∪ b|; nullopt when both are empty.
std::optional<Rational> Jaccard(const EdgeSet& a, const EdgeSet& b);

// Keeps edges whose endpoint types are both in `filter`. Edges that do not
// decode are only kept by the all-types filter.
EdgeSet FilterEdges(const EdgeSet& edges, NodeTypeSet filter);

struct InstanceKey {
  std::string page_url;
  std::string frame_url;
  int64_t crawl_iter = 0;
  friend auto operator<=>(const InstanceKey&, const InstanceKey&) = default;
};

struct InstanceScore {
  InstanceKey key;
  std::optional<Rational> score;
};

// Compares frames of `base_profile` in `base` against the same
// (page, frame, iteration) of `other_profile` in `other`. Only third-party,
// non-ad frames present on both sides are scored. Sorted by key.
std::vector<InstanceScore> FrameSimilarity(const SimOutput& base,
                                           std::string_view base_profile,
                                           const SimOutput& other,
                                           std::string_view other_profile,
                                           NodeTypeSet filter);

// Mean over defined scores; nullopt if none is defined.
std::optional<Rational> MeanDefined(std::span<const InstanceScore> scores);

struct SimilarityPoint {
  int64_t rank = 0;  // 1-based
  Rational value;    // cumulative sum / instance count
};

// Normalized cumulative curve of `compared`. Instances undefined in both
// `compared` and `baseline` are dropped; other undefined scores add 0.
// Instances missing from `baseline` count as undefined there.
std::vector<SimilarityPoint> SimilarityCurve(
    std::span<const InstanceScore> compared,
    std::span<const InstanceScore> baseline);

// Per-instance edge sets for node-type optimization. `base` and `peer` are
// two permissive crawls; `contrast` is the policy being separated from them.
struct SampleInstance {
  InstanceKey key;
  EdgeSet base;
  EdgeSet peer;
  EdgeSet contrast;
};

// Frames of interest present in all three (output, profile) sources.
std::vector<SampleInstance> BuildSample(const SimOutput& base,
                                        std::string_view base_profile,
                                        const SimOutput& peer,
                                        std::string_view peer_profile,
                                        const SimOutput& contrast,
                                        std::string_view contrast_profile);

// mean J(base, peer) - mean J(contrast, base) under `filter`; nullopt when
// either mean has no defined score.
std::optional<Rational> Separation(std::span<const SampleInstance> sample,
                                   NodeTypeSet filter);

struct OptimizationResult {
  NodeTypeSet best_subset;
  Rational separation;
  int64_t subsets_evaluated = 0;
  int64_t subsets_defined = 0;
};

// Exhaustive search over all non-empty node-type subsets. Ties go to the
// smaller subset, then to the lexicographically smaller list of types.
absl::StatusOr<OptimizationResult> OptimizeNodeTypes(
    std::span<const SampleInstance> sample, int jobs = 1);

}  // namespace storagelab

#endif  // STORAGELAB_SIMILARITY_H_
