#ifndef STORAGELAB_SYNTHETIC_H_
#define STORAGELAB_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "storagelab/trace.h"

namespace storagelab {

struct TrackerSpec {
  std::string site;  // e.g. "tracker0.net"
  bool embed_all = true;
  double embed_probability = 1.0;  // used when !embed_all
};

// Parameters of a desk-scale synthetic crawl. Sites are named
// site<i>.com and profiles p<k>; every profile visits the same page
// sequence, once per crawl iteration.
struct SyntheticTraceSpec {
  int n_sites = 1;
  std::vector<TrackerSpec> trackers;
  int pages_per_site = 1;
  int crawl_iters = 1;
  int profiles = 1;
  uint64_t seed = 0;
  // Tracker widgets emit their storage edges only when a read-back of their
  // ID cookie succeeds.
  bool adaptive = true;
  // Adds an advertising frame from ads.adnet.net to every page.
  bool include_ad_frame = false;
};

// Trackers named tracker<j>.net, all embedded on every page.
std::vector<TrackerSpec> DefaultTrackers(int count);

// Each embedded tracker frame: reads its "uid" cookie; when absent, fetches
// /id whose response sets a fresh 16-character token; reads the cookie back;
// requests /collect (which carries the cookie); and emits five fixed
// behavior edges plus two storage edges guarded by the read-back.
absl::StatusOr<Trace> GenerateSyntheticTrace(const SyntheticTraceSpec& spec);

// Edge counts of one tracker frame, for tests that reason about Jaccard.
inline constexpr int kTrackerFixedEdges = 5;
inline constexpr int kTrackerFixedOptimalEdges = 4;
inline constexpr int kTrackerStorageEdges = 2;

}  // namespace storagelab

#endif  // STORAGELAB_SYNTHETIC_H_
