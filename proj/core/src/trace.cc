#include "storagelab/trace.h"

#include <bit>

#include "absl/status/status.h"
#include "json.hpp"
#include "storagelab/status_macros.h"
#include "strings.h"

namespace storagelab {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kNodeTypeNames[kNodeTypeCount] = {
    "HtmlElement", "TextNode",     "DomRoot",        "FrameOwner",
    "Script",      "JsBuiltin",    "WebApi",         "HttpResource",
    "CookieJar",   "LocalStorage", "SessionStorage",
};

std::string EscapeField(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (char c : field) {
    if (c == '%') {
      out += "%25";
    } else if (c == '|') {
      out += "%7C";
    } else {
      out += c;
    }
  }
  return out;
}

absl::StatusOr<std::string> UnescapeField(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '%') {
      out += field[i];
      continue;
    }
    std::string_view escape = field.substr(i, 3);
    if (escape == "%25") {
      out += '%';
    } else if (escape == "%7C") {
      out += '|';
    } else {
      return absl::InvalidArgumentError(
          StrCat("bad escape in edge field '", field, "'"));
    }
    i += 2;
  }
  return out;
}

absl::StatusOr<Condition> ParseCondition(std::string_view name) {
  for (Condition c :
       {Condition::kAlways, Condition::kReadPresent, Condition::kReadAbsent}) {
    if (ConditionName(c) == name) return c;
  }
  return absl::InvalidArgumentError(StrCat("unknown condition '", name, "'"));
}

// Typed accessors that turn nlohmann exceptions into Status.
absl::StatusOr<std::string> GetString(const Json& object, const char* field) {
  auto it = object.find(field);
  if (it == object.end() || !it->is_string()) {
    return absl::InvalidArgumentError(
        StrCat("missing or non-string field '", field, "'"));
  }
  return it->get<std::string>();
}

absl::StatusOr<int64_t> GetInt(const Json& object, const char* field) {
  auto it = object.find(field);
  if (it == object.end() || !it->is_number_integer()) {
    return absl::InvalidArgumentError(
        StrCat("missing or non-integer field '", field, "'"));
  }
  return it->get<int64_t>();
}

absl::StatusOr<Condition> GetCondition(const Json& object) {
  auto it = object.find("when");
  if (it == object.end()) return Condition::kAlways;
  if (!it->is_string()) {
    return absl::InvalidArgumentError("field 'when' must be a string");
  }
  return ParseCondition(it->get<std::string>());
}

absl::StatusOr<BehaviorEdgeRecord> ParseEdgeObject(const Json& object) {
  if (!object.is_object()) {
    return absl::InvalidArgumentError("field 'edge' must be an object");
  }
  BehaviorEdgeRecord edge;
  std::string source_type;
  std::string target_type;
  ASSIGN_OR_RETURN(source_type, GetString(object, "source_type"));
  ASSIGN_OR_RETURN(edge.source_key, GetString(object, "source_key"));
  ASSIGN_OR_RETURN(edge.edge_type, GetString(object, "edge_type"));
  ASSIGN_OR_RETURN(target_type, GetString(object, "target_type"));
  ASSIGN_OR_RETURN(edge.target_key, GetString(object, "target_key"));
  std::optional<NodeType> source = ParseNodeType(source_type);
  std::optional<NodeType> target = ParseNodeType(target_type);
  if (!source || !target) {
    return absl::InvalidArgumentError(StrCat(
        "unknown node type in edge: ", source_type, " -> ", target_type));
  }
  edge.source_type = *source;
  edge.target_type = *target;
  return edge;
}

absl::StatusOr<TraceEvent> ParseEventObject(const Json& object) {
  std::string type;
  ASSIGN_OR_RETURN(type, GetString(object, "type"));

  if (type == "visit_start") {
    event::VisitStart e;
    ASSIGN_OR_RETURN(e.profile, GetString(object, "profile"));
    ASSIGN_OR_RETURN(e.crawl_iter, GetInt(object, "crawl_iter"));
    ASSIGN_OR_RETURN(e.tab, GetString(object, "tab"));
    ASSIGN_OR_RETURN(e.page_url, GetString(object, "page_url"));
    ASSIGN_OR_RETURN(e.visit_seq, GetInt(object, "visit_seq"));
    return e;
  }
  if (type == "frame_load") {
    event::FrameLoad e;
    ASSIGN_OR_RETURN(e.tab, GetString(object, "tab"));
    ASSIGN_OR_RETURN(e.frame_id, GetString(object, "frame_id"));
    ASSIGN_OR_RETURN(e.frame_url, GetString(object, "frame_url"));
    if (auto it = object.find("is_ad"); it != object.end()) {
      if (!it->is_boolean()) {
        return absl::InvalidArgumentError("field 'is_ad' must be a boolean");
      }
      e.is_ad = it->get<bool>();
    }
    return e;
  }
  if (type == "http_request") {
    event::HttpRequest e;
    ASSIGN_OR_RETURN(e.tab, GetString(object, "tab"));
    ASSIGN_OR_RETURN(e.frame_id, GetString(object, "frame_id"));
    ASSIGN_OR_RETURN(e.dest_url, GetString(object, "dest_url"));
    if (auto it = object.find("response_set_cookies"); it != object.end()) {
      if (!it->is_array()) {
        return absl::InvalidArgumentError(
            "field 'response_set_cookies' must be an array");
      }
      for (const Json& header : *it) {
        if (!header.is_string()) {
          return absl::InvalidArgumentError(
              "field 'response_set_cookies' must hold strings");
        }
        e.response_set_cookies.push_back(header.get<std::string>());
      }
    }
    ASSIGN_OR_RETURN(e.when, GetCondition(object));
    return e;
  }
  if (type == "script_storage") {
    event::ScriptStorage e;
    std::string api;
    std::string op;
    ASSIGN_OR_RETURN(e.tab, GetString(object, "tab"));
    ASSIGN_OR_RETURN(e.frame_id, GetString(object, "frame_id"));
    ASSIGN_OR_RETURN(api, GetString(object, "api"));
    ASSIGN_OR_RETURN(op, GetString(object, "op"));
    std::optional<StorageApi> parsed_api = ParseStorageApi(api);
    std::optional<StorageOp> parsed_op = ParseStorageOp(op);
    if (!parsed_api) {
      return absl::InvalidArgumentError(StrCat("unknown api '", api, "'"));
    }
    if (!parsed_op) {
      return absl::InvalidArgumentError(StrCat("unknown op '", op, "'"));
    }
    e.api = *parsed_api;
    e.op = *parsed_op;
    if (object.contains("key")) {
      ASSIGN_OR_RETURN(e.key, GetString(object, "key"));
    }
    if (object.contains("value")) {
      ASSIGN_OR_RETURN(e.value, GetString(object, "value"));
    }
    ASSIGN_OR_RETURN(e.when, GetCondition(object));
    return e;
  }
  if (type == "behavior_edge") {
    event::BehaviorEdge e;
    ASSIGN_OR_RETURN(e.tab, GetString(object, "tab"));
    ASSIGN_OR_RETURN(e.frame_id, GetString(object, "frame_id"));
    auto it = object.find("edge");
    if (it == object.end()) {
      return absl::InvalidArgumentError("missing field 'edge'");
    }
    ASSIGN_OR_RETURN(e.edge, ParseEdgeObject(*it));
    ASSIGN_OR_RETURN(e.when, GetCondition(object));
    return e;
  }
  if (type == "visit_end") {
    event::VisitEnd e;
    ASSIGN_OR_RETURN(e.tab, GetString(object, "tab"));
    return e;
  }
  return absl::InvalidArgumentError(StrCat("unknown event type '", type, "'"));
}

void PutCondition(Json& object, Condition when) {
  if (when != Condition::kAlways) object["when"] = ConditionName(when);
}

Json EventToJson(const TraceEvent& event) {
  struct Visitor {
    Json operator()(const event::VisitStart& e) const {
      Json j;
      j["type"] = "visit_start";
      j["profile"] = e.profile;
      j["crawl_iter"] = e.crawl_iter;
      j["tab"] = e.tab;
      j["page_url"] = e.page_url;
      j["visit_seq"] = e.visit_seq;
      return j;
    }
    Json operator()(const event::FrameLoad& e) const {
      Json j;
      j["type"] = "frame_load";
      j["tab"] = e.tab;
      j["frame_id"] = e.frame_id;
      j["frame_url"] = e.frame_url;
      if (e.is_ad.has_value()) j["is_ad"] = *e.is_ad;
      return j;
    }
    Json operator()(const event::HttpRequest& e) const {
      Json j;
      j["type"] = "http_request";
      j["tab"] = e.tab;
      j["frame_id"] = e.frame_id;
      j["dest_url"] = e.dest_url;
      j["response_set_cookies"] = e.response_set_cookies;
      PutCondition(j, e.when);
      return j;
    }
    Json operator()(const event::ScriptStorage& e) const {
      Json j;
      j["type"] = "script_storage";
      j["tab"] = e.tab;
      j["frame_id"] = e.frame_id;
      j["api"] = StorageApiName(e.api);
      j["op"] = StorageOpName(e.op);
      j["key"] = e.key;
      j["value"] = e.value;
      PutCondition(j, e.when);
      return j;
    }
    Json operator()(const event::BehaviorEdge& e) const {
      Json j;
      j["type"] = "behavior_edge";
      j["tab"] = e.tab;
      j["frame_id"] = e.frame_id;
      Json edge;
      edge["source_type"] = NodeTypeName(e.edge.source_type);
      edge["source_key"] = e.edge.source_key;
      edge["edge_type"] = e.edge.edge_type;
      edge["target_type"] = NodeTypeName(e.edge.target_type);
      edge["target_key"] = e.edge.target_key;
      j["edge"] = std::move(edge);
      PutCondition(j, e.when);
      return j;
    }
    Json operator()(const event::VisitEnd& e) const {
      Json j;
      j["type"] = "visit_end";
      j["tab"] = e.tab;
      return j;
    }
  };
  return std::visit(Visitor{}, event);
}

}  // namespace

std::string_view NodeTypeName(NodeType type) {
  return kNodeTypeNames[static_cast<size_t>(type)];
}

std::optional<NodeType> ParseNodeType(std::string_view name) {
  for (NodeType type : kAllNodeTypes) {
    if (NodeTypeName(type) == name) return type;
  }
  return std::nullopt;
}

bool IsStorageNodeType(NodeType type) {
  return type == NodeType::kCookieJar || type == NodeType::kLocalStorage ||
         type == NodeType::kSessionStorage;
}

int NodeTypeSet::size() const { return std::popcount(bits_); }

std::vector<NodeType> NodeTypeSet::types() const {
  std::vector<NodeType> out;
  for (NodeType type : kAllNodeTypes) {
    if (contains(type)) out.push_back(type);
  }
  return out;
}

std::string NodeTypeSet::ToString() const {
  return StrJoin(types(), ",", [](std::string* out, NodeType type) {
    StrAppend(out, NodeTypeName(type));
  });
}

absl::StatusOr<NodeTypeSet> ParseNodeFilter(std::string_view text) {
  text = StripAsciiWhitespace(text);
  if (text == "all") return NodeTypeSet::All();
  if (text == "optimal") return NodeTypeSet::Optimal();
  NodeTypeSet set;
  for (std::string_view name : StrSplit(text, ',', absl::SkipWhitespace())) {
    name = StripAsciiWhitespace(name);
    std::optional<NodeType> type = ParseNodeType(name);
    if (!type.has_value()) {
      return absl::InvalidArgumentError(
          StrCat("unknown node type '", name, "' in node filter"));
    }
    set.insert(*type);
  }
  if (set.size() == 0) {
    return absl::InvalidArgumentError("empty node filter");
  }
  return set;
}

std::string_view ConditionName(Condition condition) {
  switch (condition) {
    case Condition::kAlways:
      return "always";
    case Condition::kReadPresent:
      return "read_present";
    case Condition::kReadAbsent:
      return "read_absent";
  }
  return "always";
}

std::string CanonicalEdge(const BehaviorEdgeRecord& edge) {
  return StrCat(NodeTypeName(edge.source_type), "|",
                EscapeField(edge.source_key), "|", EscapeField(edge.edge_type),
                "|", NodeTypeName(edge.target_type), "|",
                EscapeField(edge.target_key));
}

absl::StatusOr<BehaviorEdgeRecord> ParseCanonicalEdge(std::string_view text) {
  std::vector<std::string_view> fields = StrSplit(text, '|');
  if (fields.size() != 5) {
    return absl::InvalidArgumentError(
        StrCat("canonical edge needs 5 fields: '", text, "'"));
  }
  std::optional<NodeType> source = ParseNodeType(fields[0]);
  std::optional<NodeType> target = ParseNodeType(fields[3]);
  if (!source || !target) {
    return absl::InvalidArgumentError(
        StrCat("unknown node type in edge '", text, "'"));
  }
  BehaviorEdgeRecord edge;
  edge.source_type = *source;
  edge.target_type = *target;
  ASSIGN_OR_RETURN(edge.source_key, UnescapeField(fields[1]));
  ASSIGN_OR_RETURN(edge.edge_type, UnescapeField(fields[2]));
  ASSIGN_OR_RETURN(edge.target_key, UnescapeField(fields[4]));
  return edge;
}

absl::StatusOr<std::pair<NodeType, NodeType>> CanonicalEdgeTypes(
    std::string_view text) {
  const size_t first = text.find('|');
  if (first == std::string_view::npos) {
    return absl::InvalidArgumentError(
        StrCat("bad canonical edge '", text, "'"));
  }
  const size_t third = text.find('|', text.find('|', first + 1) + 1);
  const size_t fourth = third == std::string_view::npos
                            ? std::string_view::npos
                            : text.find('|', third + 1);
  if (fourth == std::string_view::npos) {
    return absl::InvalidArgumentError(
        StrCat("bad canonical edge '", text, "'"));
  }
  std::optional<NodeType> source = ParseNodeType(text.substr(0, first));
  std::optional<NodeType> target =
      ParseNodeType(text.substr(third + 1, fourth - third - 1));
  if (!source || !target) {
    return absl::InvalidArgumentError(
        StrCat("unknown node type in edge '", text, "'"));
  }
  return std::make_pair(*source, *target);
}

absl::StatusOr<Trace> ParseTrace(std::string_view text) {
  Trace trace;
  size_t line_number = 0;
  for (std::string_view line : StrSplit(text, '\n')) {
    ++line_number;
    line = StripAsciiWhitespace(line);
    if (line.empty()) continue;
    Json object = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (object.is_discarded() || !object.is_object()) {
      return absl::InvalidArgumentError(
          StrCat("trace line ", line_number, ": not a JSON object"));
    }
    absl::StatusOr<TraceEvent> event = ParseEventObject(object);
    if (!event.ok()) {
      return absl::InvalidArgumentError(
          StrCat("trace line ", line_number, ": ", event.status().message()));
    }
    trace.push_back(*std::move(event));
  }
  return trace;
}

std::string SerializeEvent(const TraceEvent& event) {
  return EventToJson(event).dump();
}

std::string SerializeTrace(const Trace& trace) {
  std::string out;
  for (const TraceEvent& event : trace) {
    StrAppend(&out, SerializeEvent(event), "\n");
  }
  return out;
}

}  // namespace storagelab
