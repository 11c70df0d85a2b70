#ifndef STORAGELAB_TOOLS_COMMANDS_H_
#define STORAGELAB_TOOLS_COMMANDS_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"

namespace storagelab::cli {

struct SimulateConfig {
  std::string policy;
  std::string trace_path;
  std::string out_dir;
  std::string psl_path;      // empty: built-in rules
  std::string filters_path;  // empty: no ad rules
  int64_t tick_seconds = 1;
  bool origin_keyed = false;
  int jobs = 1;
  uint64_t seed = 0;
};

struct GenTraceConfig {
  int sites = 10;
  int trackers = 3;
  int pages_per_site = 1;
  int iters = 1;
  int profiles = 1;
  uint64_t seed = 0;
  double embed_probability = 1.0;
  bool adaptive = true;
  bool ad_frame = false;
  std::string out_path;
};

struct MetricsConfig {
  std::string command;  // picf, cross-site, ...
  std::vector<std::string> runs;
  std::string out_dir;
  int threshold = 8;
  int min_sites = 2;
  std::string cross_time_mode = "any";
  std::string node_filter = "all";
  std::string baseline;  // run directory; defaults to the permissive run
  std::string contrast;  // run directory; defaults to the blocking run
  std::string base_profile = "p1";
  std::string peer_profile = "p2";
  std::string compare_profile;  // defaults to base_profile
  int k = 50;
  std::string psl_path;
  std::string grades_path;
  int jobs = 1;
  uint64_t seed = 0;
};

// Status codes other than kInternal and kUnknown map to the input-failure
// exit code.
absl::Status Simulate(const SimulateConfig& config, std::ostream& out);
absl::Status GenTrace(const GenTraceConfig& config, std::ostream& out);
absl::Status Metrics(const MetricsConfig& config, std::ostream& out);

}  // namespace storagelab::cli

#endif  // STORAGELAB_TOOLS_COMMANDS_H_
