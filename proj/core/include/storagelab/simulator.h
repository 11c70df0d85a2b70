#ifndef STORAGELAB_SIMULATOR_H_
#define STORAGELAB_SIMULATOR_H_

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "storagelab/filterlist.h"
#include "storagelab/policy.h"
#include "storagelab/psl.h"
#include "storagelab/trace.h"

namespace storagelab {

// One cookie attached to a request whose destination was third-party
// relative to the top-level page.
struct CookieFlowRecord {
  std::string profile;
  int64_t crawl_iter = 0;
  int64_t visit_seq = 0;
  std::string top_site;
  std::string third_party_site;
  std::string cookie_name;
  std::string cookie_value;

  friend bool operator==(const CookieFlowRecord&,
                         const CookieFlowRecord&) = default;
};

// Frames are identified by full URL.
struct FrameKey {
  std::string page_url;
  std::string frame_url;
  std::string profile;
  int64_t crawl_iter = 0;
  friend auto operator<=>(const FrameKey&, const FrameKey&) = default;
};

struct FrameRecord {
  std::set<std::string> edges;  // canonical edge encodings
  bool is_ad = false;
  Party party = Party::kThird;
  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

struct SimOutput {
  std::vector<CookieFlowRecord> flows;
  std::map<FrameKey, FrameRecord> frames;
  std::vector<std::string> storage_op_log;  // diagnostic only

  friend bool operator==(const SimOutput&, const SimOutput&) = default;
};

struct ReplayOptions {
  // Virtual seconds per event; event i happens at time i * tick_seconds.
  Timestamp tick_seconds = 1;
  PartitionOptions partition;
  bool log_storage_ops = false;
  // Profiles are independent browsers, so they can replay on separate
  // workers. Output is identical to serial replay.
  int jobs = 1;
};

// Replays `trace` under `policy`, keeping an independent PartitionStore per
// profile. Errors name the 0-based index of the offending event.
absl::StatusOr<SimOutput> Replay(const Trace& trace, PolicyKind policy,
                                 const SuffixRuleSet& rules,
                                 const AdRuleSet& ads,
                                 const ReplayOptions& options = {});

}  // namespace storagelab

#endif  // STORAGELAB_SIMULATOR_H_
