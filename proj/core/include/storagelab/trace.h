#ifndef STORAGELAB_TRACE_H_
#define STORAGELAB_TRACE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "storagelab/policy.h"

namespace storagelab {

// Behavior-graph node types considered for compatibility analysis.
enum class NodeType : uint8_t {
  kHtmlElement,
  kTextNode,
  kDomRoot,
  kFrameOwner,
  kScript,
  kJsBuiltin,
  kWebApi,
  kHttpResource,
  kCookieJar,
  kLocalStorage,
  kSessionStorage,
};

inline constexpr size_t kNodeTypeCount = 11;

inline constexpr std::array<NodeType, kNodeTypeCount> kAllNodeTypes = {
    NodeType::kHtmlElement,  NodeType::kTextNode,       NodeType::kDomRoot,
    NodeType::kFrameOwner,   NodeType::kScript,         NodeType::kJsBuiltin,
    NodeType::kWebApi,       NodeType::kHttpResource,   NodeType::kCookieJar,
    NodeType::kLocalStorage, NodeType::kSessionStorage,
};

std::string_view NodeTypeName(NodeType type);
std::optional<NodeType> ParseNodeType(std::string_view name);
bool IsStorageNodeType(NodeType type);

// Bitmask over NodeType.
class NodeTypeSet {
 public:
  constexpr NodeTypeSet() = default;
  constexpr explicit NodeTypeSet(uint16_t bits) : bits_(bits) {}
  constexpr NodeTypeSet(std::initializer_list<NodeType> types) {
    for (NodeType type : types) bits_ |= Bit(type);
  }

  static constexpr NodeTypeSet All() {
    return NodeTypeSet(static_cast<uint16_t>((1u << kNodeTypeCount) - 1));
  }
  // Scripts, JS builtins, HTTP resources, frame structures and storage
  // mechanisms.
  static constexpr NodeTypeSet Optimal() {
    return {NodeType::kScript,       NodeType::kJsBuiltin,
            NodeType::kHttpResource, NodeType::kDomRoot,
            NodeType::kFrameOwner,   NodeType::kCookieJar,
            NodeType::kLocalStorage, NodeType::kSessionStorage};
  }

  constexpr bool contains(NodeType type) const { return bits_ & Bit(type); }
  constexpr void insert(NodeType type) { bits_ |= Bit(type); }
  constexpr bool Includes(NodeTypeSet other) const {
    return (other.bits_ & ~bits_) == 0;
  }
  constexpr uint16_t bits() const { return bits_; }
  int size() const;
  std::vector<NodeType> types() const;

  // Comma-separated type names in enum order.
  std::string ToString() const;

  friend constexpr bool operator==(NodeTypeSet, NodeTypeSet) = default;

 private:
  static constexpr uint16_t Bit(NodeType type) {
    return static_cast<uint16_t>(1u << static_cast<unsigned>(type));
  }
  uint16_t bits_ = 0;
};

// "all", "optimal", or a comma-separated list of type names.
absl::StatusOr<NodeTypeSet> ParseNodeFilter(std::string_view text);

struct BehaviorEdgeRecord {
  NodeType source_type = NodeType::kScript;
  std::string source_key;
  std::string edge_type;
  NodeType target_type = NodeType::kScript;
  std::string target_key;

  friend bool operator==(const BehaviorEdgeRecord&,
                         const BehaviorEdgeRecord&) = default;
};

// The five fields joined by '|' with '%' and '|' percent-escaped inside each
// field, so the encoding is injective. Set membership of edges uses this.
std::string CanonicalEdge(const BehaviorEdgeRecord& edge);
absl::StatusOr<BehaviorEdgeRecord> ParseCanonicalEdge(std::string_view text);

// Node types at both ends of a canonical edge, without decoding the keys.
absl::StatusOr<std::pair<NodeType, NodeType>> CanonicalEdgeTypes(
    std::string_view text);

// Content-side guard on an event, evaluated against the result of the
// frame's most recent storage read. This is how a trace expresses script
// logic such as "set an ID only if none was found".
enum class Condition { kAlways, kReadPresent, kReadAbsent };
std::string_view ConditionName(Condition condition);

namespace event {

struct VisitStart {
  std::string profile;
  int64_t crawl_iter = 0;
  std::string tab;
  std::string page_url;
  int64_t visit_seq = 0;
  friend bool operator==(const VisitStart&, const VisitStart&) = default;
};

struct FrameLoad {
  std::string tab;
  std::string frame_id;
  std::string frame_url;
  std::optional<bool> is_ad;  // overrides filter-list matching when present
  friend bool operator==(const FrameLoad&, const FrameLoad&) = default;
};

struct HttpRequest {
  std::string tab;
  std::string frame_id;
  std::string dest_url;
  std::vector<std::string> response_set_cookies;
  Condition when = Condition::kAlways;
  friend bool operator==(const HttpRequest&, const HttpRequest&) = default;
};

struct ScriptStorage {
  std::string tab;
  std::string frame_id;
  StorageApi api = StorageApi::kLocal;
  StorageOp op = StorageOp::kGet;
  std::string key;
  std::string value;
  Condition when = Condition::kAlways;
  friend bool operator==(const ScriptStorage&, const ScriptStorage&) = default;
};

struct BehaviorEdge {
  std::string tab;
  std::string frame_id;
  BehaviorEdgeRecord edge;
  Condition when = Condition::kAlways;
  friend bool operator==(const BehaviorEdge&, const BehaviorEdge&) = default;
};

struct VisitEnd {
  std::string tab;
  friend bool operator==(const VisitEnd&, const VisitEnd&) = default;
};

}  // namespace event

using TraceEvent =
    std::variant<event::VisitStart, event::FrameLoad, event::HttpRequest,
                 event::ScriptStorage, event::BehaviorEdge, event::VisitEnd>;

using Trace = std::vector<TraceEvent>;

// Line-delimited JSON, one event object per line with a "type"
// discriminator: visit_start, frame_load, http_request, script_storage,
// behavior_edge, visit_end. Blank lines are ignored. Errors name the 1-based
// line number.
absl::StatusOr<Trace> ParseTrace(std::string_view text);

// Inverse of ParseTrace. Keys are emitted in a fixed order and optional
// fields only when set, so equal traces serialize to identical bytes.
std::string SerializeTrace(const Trace& trace);
std::string SerializeEvent(const TraceEvent& event);

}  // namespace storagelab

#endif  // STORAGELAB_TRACE_H_
