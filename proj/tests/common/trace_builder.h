#ifndef STORAGELAB_TESTS_COMMON_TRACE_BUILDER_H_
#define STORAGELAB_TESTS_COMMON_TRACE_BUILDER_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "storagelab/trace.h"

namespace storagelab::testing {

// Terse construction of hand-written traces. visit_seq is assigned per
// profile in call order.
class TraceBuilder {
 public:
  TraceBuilder& Visit(const std::string& tab, const std::string& page_url,
                      const std::string& profile = "p1", int64_t iter = 1) {
    trace_.push_back(
        event::VisitStart{profile, iter, tab, page_url, ++visit_seq_[profile]});
    return *this;
  }
  TraceBuilder& Frame(const std::string& tab, const std::string& frame_id,
                      const std::string& url,
                      std::optional<bool> is_ad = std::nullopt) {
    trace_.push_back(event::FrameLoad{tab, frame_id, url, is_ad});
    return *this;
  }
  TraceBuilder& Storage(const std::string& tab, const std::string& frame_id,
                        StorageApi api, StorageOp op, const std::string& key,
                        const std::string& value = "",
                        Condition when = Condition::kAlways) {
    trace_.push_back(
        event::ScriptStorage{tab, frame_id, api, op, key, value, when});
    return *this;
  }
  TraceBuilder& Request(const std::string& tab, const std::string& frame_id,
                        const std::string& url,
                        std::vector<std::string> set_cookies = {},
                        Condition when = Condition::kAlways) {
    trace_.push_back(
        event::HttpRequest{tab, frame_id, url, std::move(set_cookies), when});
    return *this;
  }
  TraceBuilder& Edge(const std::string& tab, const std::string& frame_id,
                     BehaviorEdgeRecord edge,
                     Condition when = Condition::kAlways) {
    trace_.push_back(event::BehaviorEdge{tab, frame_id, std::move(edge), when});
    return *this;
  }
  TraceBuilder& End(const std::string& tab) {
    trace_.push_back(event::VisitEnd{tab});
    return *this;
  }
  Trace Build() const { return trace_; }

 private:
  Trace trace_;
  std::map<std::string, int64_t> visit_seq_;
};

}  // namespace storagelab::testing

#endif  // STORAGELAB_TESTS_COMMON_TRACE_BUILDER_H_
