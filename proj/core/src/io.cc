#include "storagelab/io.h"

#include <openssl/evp.h>

#include <fstream>
#include <sstream>

#include "absl/strings/str_format.h"
#include "json.hpp"
#include "storagelab/status_macros.h"
#include "strings.h"

namespace storagelab {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kFlowHeader[] = {
    "profile",          "crawl_iter",  "visit_seq",   "top_site",
    "third_party_site", "cookie_name", "cookie_value"};

absl::StatusOr<int64_t> ParseInt(std::string_view text, std::string_view what,
                                 size_t row) {
  int64_t value = 0;
  if (!SimpleAtoi(text, &value)) {
    return absl::InvalidArgumentError(
        StrCat("row ", row, ": bad ", what, " '", text, "'"));
  }
  return value;
}

}  // namespace

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(StrCat("cannot open ", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::filesystem::path& path,
                       std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(StrCat("cannot write ", path.string()));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) {
    return absl::DataLossError(StrCat("short write to ", path.string()));
  }
  return absl::OkStatus();
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  std::string hex;
  hex.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    absl::StrAppendFormat(&hex, "%02x", digest[i]);
  }
  return hex;
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string CsvRow(const std::vector<std::string>& fields) {
  std::string row;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) row += ',';
    row += CsvEscape(fields[i]);
  }
  row += '\n';
  return row;
}

absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsv(
    std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  size_t line = 1;

  auto end_row = [&] {
    if (field_started || !row.empty()) {
      row.push_back(std::move(field));
      rows.push_back(std::move(row));
    }
    row.clear();
    field.clear();
    field_started = false;
  };

  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          return absl::InvalidArgumentError(
              StrCat("CSV line ", line, ": stray quote"));
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) {
    return absl::InvalidArgumentError("CSV ends inside a quoted field");
  }
  end_row();
  return rows;
}

std::string FlowsToCsv(const std::vector<CookieFlowRecord>& flows) {
  std::vector<std::string> header(std::begin(kFlowHeader),
                                  std::end(kFlowHeader));
  std::string out = CsvRow(header);
  for (const CookieFlowRecord& flow : flows) {
    out += CsvRow({flow.profile, StrCat(flow.crawl_iter),
                   StrCat(flow.visit_seq), flow.top_site, flow.third_party_site,
                   flow.cookie_name, flow.cookie_value});
  }
  return out;
}

absl::StatusOr<std::vector<CookieFlowRecord>> FlowsFromCsv(
    std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  ASSIGN_OR_RETURN(rows, ParseCsv(text));
  if (rows.empty())
    return absl::InvalidArgumentError("flow table has no header");
  const std::vector<std::string> header(std::begin(kFlowHeader),
                                        std::end(kFlowHeader));
  if (rows.front() != header) {
    return absl::InvalidArgumentError("unexpected flow table header");
  }
  std::vector<CookieFlowRecord> flows;
  for (size_t r = 1; r < rows.size(); ++r) {
    const std::vector<std::string>& row = rows[r];
    if (row.size() != header.size()) {
      return absl::InvalidArgumentError(StrCat("row ", r, ": expected ",
                                               header.size(), " fields, got ",
                                               row.size()));
    }
    CookieFlowRecord flow;
    flow.profile = row[0];
    ASSIGN_OR_RETURN(flow.crawl_iter, ParseInt(row[1], "crawl_iter", r));
    ASSIGN_OR_RETURN(flow.visit_seq, ParseInt(row[2], "visit_seq", r));
    flow.top_site = row[3];
    flow.third_party_site = row[4];
    flow.cookie_name = row[5];
    flow.cookie_value = row[6];
    flows.push_back(std::move(flow));
  }
  return flows;
}

std::string FramesToArchive(const std::map<FrameKey, FrameRecord>& frames) {
  std::string out;
  for (const auto& [key, record] : frames) {
    Json j;
    j["page_url"] = key.page_url;
    j["frame_url"] = key.frame_url;
    j["profile"] = key.profile;
    j["crawl_iter"] = key.crawl_iter;
    j["party"] = PartyName(record.party);
    j["is_ad"] = record.is_ad;
    j["edges"] = Json::array();
    for (const std::string& edge : record.edges) j["edges"].push_back(edge);
    StrAppend(&out, j.dump(), "\n");
  }
  return out;
}

absl::StatusOr<std::map<FrameKey, FrameRecord>> FramesFromArchive(
    std::string_view text) {
  std::map<FrameKey, FrameRecord> frames;
  size_t line_number = 0;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_number;
    if (line.empty()) continue;

    Json j = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    auto bad = [&](std::string_view what) {
      return absl::InvalidArgumentError(
          StrCat("archive line ", line_number, ": ", what));
    };
    if (j.is_discarded() || !j.is_object()) return bad("not a JSON object");
    if (!j.contains("page_url") || !j["page_url"].is_string() ||
        !j.contains("frame_url") || !j["frame_url"].is_string() ||
        !j.contains("profile") || !j["profile"].is_string() ||
        !j.contains("crawl_iter") || !j["crawl_iter"].is_number_integer() ||
        !j.contains("party") || !j["party"].is_string() ||
        !j.contains("is_ad") || !j["is_ad"].is_boolean() ||
        !j.contains("edges") || !j["edges"].is_array()) {
      return bad("missing or mistyped field");
    }
    FrameKey key{
        j["page_url"].get<std::string>(), j["frame_url"].get<std::string>(),
        j["profile"].get<std::string>(), j["crawl_iter"].get<int64_t>()};
    FrameRecord record;
    const std::string party = j["party"].get<std::string>();
    if (party == "first") {
      record.party = Party::kFirst;
    } else if (party == "third") {
      record.party = Party::kThird;
    } else {
      return bad(StrCat("unknown party '", party, "'"));
    }
    record.is_ad = j["is_ad"].get<bool>();
    for (const Json& edge : j["edges"]) {
      if (!edge.is_string()) return bad("non-string edge");
      record.edges.insert(edge.get<std::string>());
    }
    frames.insert_or_assign(std::move(key), std::move(record));
  }
  return frames;
}

absl::StatusOr<RunDirectory> LoadRunDirectory(
    const std::filesystem::path& dir) {
  RunDirectory run;
  run.path = dir;
  std::string manifest_text;
  ASSIGN_OR_RETURN(manifest_text, ReadFile(dir / kManifestFileName));
  Json manifest = Json::parse(manifest_text, nullptr, false);
  if (manifest.is_discarded() || !manifest.is_object()) {
    return absl::InvalidArgumentError(StrCat("bad manifest in ", dir.string()));
  }
  const Json* policy = nullptr;
  const Json* trace_hash = nullptr;
  if (auto config = manifest.find("config");
      config != manifest.end() && config->is_object()) {
    if (auto it = config->find("policy");
        it != config->end() && it->is_string()) {
      policy = &*it;
    }
  }
  if (auto inputs = manifest.find("inputs");
      inputs != manifest.end() && inputs->is_object()) {
    if (auto trace = inputs->find("trace");
        trace != inputs->end() && trace->is_object()) {
      if (auto it = trace->find("sha256");
          it != trace->end() && it->is_string()) {
        trace_hash = &*it;
      }
    }
  }
  if (policy == nullptr || trace_hash == nullptr) {
    return absl::InvalidArgumentError(
        StrCat("manifest in ", dir.string(),
               " lacks config.policy or inputs.trace.sha256"));
  }
  run.policy = policy->get<std::string>();
  run.trace_sha256 = trace_hash->get<std::string>();

  std::string flows_text;
  std::string frames_text;
  ASSIGN_OR_RETURN(flows_text, ReadFile(dir / kFlowsFileName));
  ASSIGN_OR_RETURN(frames_text, ReadFile(dir / kFramesFileName));
  ASSIGN_OR_RETURN(run.output.flows, FlowsFromCsv(flows_text));
  ASSIGN_OR_RETURN(run.output.frames, FramesFromArchive(frames_text));
  return run;
}

}  // namespace storagelab
