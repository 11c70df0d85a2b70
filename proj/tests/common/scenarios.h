#ifndef STORAGELAB_TESTS_COMMON_SCENARIOS_H_
#define STORAGELAB_TESTS_COMMON_SCENARIOS_H_

#include <span>
#include <string>

#include "absl/status/statusor.h"
#include "storagelab/policy.h"
#include "storagelab/trace.h"

namespace storagelab::testing {

// A writer frame stores a value, later a reader frame looks it up. The
// visible_* fields say which policies let the reader see it.
struct StorageScenario {
  std::string name;
  std::string description;
  bool visible_permissive;
  bool visible_blocking;
  bool visible_site_keyed;
  bool visible_page_length;

  bool Expected(PolicyKind policy) const;
};

std::span<const StorageScenario> StorageScenarios();

// Trace for `scenario` with reads and writes on `api` (cookie, local or
// indexed).
Trace ScenarioTrace(const StorageScenario& scenario, StorageApi api);

// Replays the trace and reports whether the reader found the value.
absl::StatusOr<bool> ReaderSeesValue(const StorageScenario& scenario,
                                     StorageApi api, PolicyKind policy);

}  // namespace storagelab::testing

#endif  // STORAGELAB_TESTS_COMMON_SCENARIOS_H_
