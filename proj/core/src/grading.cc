#include "storagelab/grading.h"

#include <array>
#include <set>
#include <utility>

#include "absl/status/status.h"
#include "storagelab/io.h"
#include "storagelab/status_macros.h"
#include "strings.h"

namespace storagelab {
namespace {

constexpr int kMinGrade = 1;
constexpr int kMaxGrade = 3;

bool ValidGrade(int grade) { return grade >= kMinGrade && grade <= kMaxGrade; }

}  // namespace

absl::StatusOr<GradeStats> ComputeGradeStats(std::span<const GradeCell> cells) {
  if (cells.empty()) return absl::InvalidArgumentError("no grades");
  std::array<int64_t, kMaxGrade + 1> marginal_a{};
  std::array<int64_t, kMaxGrade + 1> marginal_b{};
  std::set<std::pair<std::string, std::string>> seen;
  std::map<std::string, std::pair<std::set<std::string>, int64_t>> by_profile;
  GradeStats stats;
  for (const GradeCell& cell : cells) {
    if (!ValidGrade(cell.grader_a) || !ValidGrade(cell.grader_b)) {
      return absl::InvalidArgumentError(
          StrCat("grade outside 1..3 for ", cell.url, " under ", cell.profile));
    }
    if (!seen.emplace(cell.url, cell.profile).second) {
      return absl::InvalidArgumentError(
          StrCat("duplicate grades for ", cell.url, " under ", cell.profile));
    }
    ++stats.cells;
    if (cell.grader_a == cell.grader_b) ++stats.agreements;
    ++marginal_a[cell.grader_a];
    ++marginal_b[cell.grader_b];
    auto& [urls, broken] = by_profile[cell.profile];
    urls.insert(cell.url);
    if (std::max(cell.grader_a, cell.grader_b) > kMinGrade) ++broken;
  }

  const int64_t n = stats.cells;
  stats.agreement = Rational(stats.agreements, n);
  stats.agreement_pct = 100.0 * ToDouble(stats.agreement);

  // kappa = (p_o - p_e) / (1 - p_e), scaled by n^2 to stay in integers.
  int64_t chance = 0;
  for (int k = kMinGrade; k <= kMaxGrade; ++k) {
    chance += marginal_a[k] * marginal_b[k];
  }
  const int64_t denominator = n * n - chance;
  if (denominator == 0) {
    if (stats.agreements != n) {
      return absl::InvalidArgumentError(
          "kappa undefined: chance agreement is 1 but observed agreement is "
          "not");
    }
    stats.kappa = 1;
  } else {
    stats.kappa = Rational(stats.agreements * n - chance, denominator);
  }
  stats.cohens_kappa = ToDouble(stats.kappa);

  for (const auto& [profile, entry] : by_profile) {
    BreakageRow row;
    row.broken = entry.second;
    row.n = static_cast<int64_t>(entry.first.size());
    row.fraction = Rational(row.broken, row.n);
    row.pct = 100.0 * ToDouble(row.fraction);
    stats.breakage[profile] = row;
  }
  return stats;
}

absl::StatusOr<std::vector<GradeCell>> ParseGradesCsv(std::string_view text) {
  ASSIGN_OR_RETURN(auto rows, ParseCsv(text));
  const std::vector<std::string> header = {"url", "profile", "grader_a",
                                           "grader_b"};
  if (rows.empty() || rows[0] != header) {
    return absl::InvalidArgumentError(
        StrCat("grades header must be ", StrJoin(header, ",")));
  }
  std::vector<GradeCell> cells;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) {
      return absl::InvalidArgumentError(
          StrCat("grades row ", i + 1, ": expected 4 fields"));
    }
    GradeCell cell{row[0], row[1]};
    if (!SimpleAtoi(row[2], &cell.grader_a) ||
        !SimpleAtoi(row[3], &cell.grader_b)) {
      return absl::InvalidArgumentError(
          StrCat("grades row ", i + 1, ": grades must be integers"));
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

}  // namespace storagelab
