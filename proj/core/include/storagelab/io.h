#ifndef STORAGELAB_IO_H_
#define STORAGELAB_IO_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "storagelab/simulator.h"

namespace storagelab {

// Whole-file helpers. Files are read and written in binary mode so output
// bytes do not depend on the platform's newline convention.
absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path);
absl::Status WriteFile(const std::filesystem::path& path,
                       std::string_view contents);

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);

// RFC 4180 CSV: fields containing ',', '"', CR or LF are quoted.
std::string CsvEscape(std::string_view field);
std::string CsvRow(const std::vector<std::string>& fields);
absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsv(
    std::string_view text);

// Flow table with header
// profile,crawl_iter,visit_seq,top_site,third_party_site,cookie_name,cookie_value
std::string FlowsToCsv(const std::vector<CookieFlowRecord>& flows);
absl::StatusOr<std::vector<CookieFlowRecord>> FlowsFromCsv(
    std::string_view text);

// Edge-set archive: one JSON object per line and frame instance, ordered by
// frame key, with the canonical edge strings sorted:
// {"page_url":..,"frame_url":..,"profile":..,"crawl_iter":..,"party":..,
//  "is_ad":..,"edges":[..]}
std::string FramesToArchive(const std::map<FrameKey, FrameRecord>& frames);
absl::StatusOr<std::map<FrameKey, FrameRecord>> FramesFromArchive(
    std::string_view text);

inline constexpr std::string_view kFlowsFileName = "flows.csv";
inline constexpr std::string_view kFramesFileName = "frames.jsonl";
inline constexpr std::string_view kManifestFileName = "manifest.json";

// A simulation run directory as written by `storagelab simulate`.
struct RunDirectory {
  std::filesystem::path path;
  std::string policy;
  std::string trace_sha256;
  SimOutput output;  // flows and frames; no op log
};

absl::StatusOr<RunDirectory> LoadRunDirectory(const std::filesystem::path& dir);

}  // namespace storagelab

#endif  // STORAGELAB_IO_H_
