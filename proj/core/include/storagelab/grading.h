#ifndef STORAGELAB_GRADING_H_
#define STORAGELAB_GRADING_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "storagelab/rational.h"

namespace storagelab {

// One candidate URL visited under one profile, scored 1 (works) to 3
// (broken) by two graders.
struct GradeCell {
  std::string url;
  std::string profile;
  int grader_a = 1;
  int grader_b = 1;
};

struct BreakageRow {
  int64_t broken = 0;
  int64_t n = 0;  // distinct URLs graded under the profile
  Rational fraction;
  double pct = 0;
};

struct GradeStats {
  int64_t cells = 0;
  int64_t agreements = 0;
  Rational agreement;
  double agreement_pct = 0;
  Rational kappa;
  double cohens_kappa = 0;
  std::map<std::string, BreakageRow> breakage;  // by profile
};

// A cell is broken when the higher of its two grades exceeds 1.
absl::StatusOr<GradeStats> ComputeGradeStats(std::span<const GradeCell> cells);

// CSV with header url,profile,grader_a,grader_b.
absl::StatusOr<std::vector<GradeCell>> ParseGradesCsv(std::string_view text);

}  // namespace storagelab

#endif  // STORAGELAB_GRADING_H_
