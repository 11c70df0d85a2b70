#include "storagelab/simulator.h"

#include <algorithm>
#include <thread>
#include <utility>

#include "absl/status/status.h"
#include "storagelab/status_macros.h"
#include "strings.h"

namespace storagelab {
namespace {

struct FrameState {
  std::string url_text;
  Url url;
  FrameKey key;
  // Result of the frame's most recent storage read; nullopt before any read.
  std::optional<bool> last_read_present;
};

struct TabState {
  std::string profile;
  int64_t crawl_iter = 0;
  int64_t visit_seq = 0;
  std::string page_url;
  Url top;
  LoadKey load_key;
  bool open = false;
  std::map<std::string, FrameState> frames;
};

// Output of one worker. Flows and log lines carry the index of the event
// that produced them so several workers can be merged in trace order.
struct PartialOutput {
  std::vector<std::pair<size_t, CookieFlowRecord>> flows;
  std::map<FrameKey, FrameRecord> frames;
  std::vector<std::pair<size_t, std::string>> log;
};

absl::Status EventError(size_t index, std::string_view message) {
  return absl::InvalidArgumentError(StrCat("event ", index, ": ", message));
}

bool ConditionHolds(Condition when, const FrameState& frame) {
  switch (when) {
    case Condition::kAlways:
      return true;
    case Condition::kReadPresent:
      return frame.last_read_present.value_or(false);
    case Condition::kReadAbsent:
      return !frame.last_read_present.value_or(false);
  }
  return true;
}

class Replayer {
 public:
  Replayer(PolicyKind policy, const SuffixRuleSet& rules, const AdRuleSet& ads,
           const ReplayOptions& options)
      : policy_(policy), rules_(rules), ads_(ads), options_(options) {}

  absl::Status Run(const Trace& trace, const std::vector<size_t>& indices) {
    for (size_t index : indices) {
      now_ = static_cast<Timestamp>(index) * options_.tick_seconds;
      absl::Status status =
          std::visit([&](const auto& event) { return Handle(index, event); },
                     trace[index]);
      if (!status.ok()) return status;
    }
    return absl::OkStatus();
  }

  PartialOutput TakeOutput() { return std::move(output_); }

 private:
  absl::StatusOr<TabState*> OpenTab(size_t index, const std::string& tab) {
    auto it = tabs_.find(tab);
    if (it == tabs_.end() || !it->second.open) {
      return EventError(index, StrCat("tab '", tab, "' has no open visit"));
    }
    return &it->second;
  }

  absl::StatusOr<FrameState*> KnownFrame(size_t index, TabState& tab,
                                         const std::string& frame_id) {
    auto it = tab.frames.find(frame_id);
    if (it == tab.frames.end()) {
      return EventError(index, StrCat("unknown frame_id '", frame_id, "'"));
    }
    return &it->second;
  }

  void EndLoad(TabState& tab) {
    stores_[tab.profile].EndPageLoad(tab.load_key);
    tab.open = false;
    tab.frames.clear();
  }

  void Log(size_t index, std::string line) {
    if (options_.log_storage_ops)
      output_.log.emplace_back(index, std::move(line));
  }

  absl::Status Handle(size_t index, const event::VisitStart& e) {
    absl::StatusOr<Url> top = ParseUrl(e.page_url);
    if (!top.ok()) return EventError(index, FromAbsl(top.status().message()));
    auto last = last_visit_seq_.find(e.profile);
    if (last != last_visit_seq_.end() && e.visit_seq <= last->second) {
      return EventError(
          index, StrCat("visit_seq ", e.visit_seq,
                        " not increasing for profile '", e.profile, "'"));
    }
    last_visit_seq_[e.profile] = e.visit_seq;

    TabState& tab = tabs_[e.tab];
    // A new top-level commit on a tab discards the previous page, reloads of
    // the same URL included.
    if (tab.open) EndLoad(tab);
    tab.profile = e.profile;
    tab.crawl_iter = e.crawl_iter;
    tab.visit_seq = e.visit_seq;
    tab.page_url = e.page_url;
    tab.top = *std::move(top);
    // Event indices are unique and increasing, which is all a load key
    // needs; using them keeps keys identical between serial and parallel
    // replay.
    tab.load_key = LoadKey{static_cast<uint64_t>(index) + 1};
    tab.open = true;
    return absl::OkStatus();
  }

  absl::Status Handle(size_t index, const event::FrameLoad& e) {
    ASSIGN_OR_RETURN(TabState * tab, OpenTab(index, e.tab));
    absl::StatusOr<Url> url = ParseUrl(e.frame_url);
    if (!url.ok()) return EventError(index, FromAbsl(url.status().message()));

    FrameState frame;
    frame.url_text = e.frame_url;
    frame.url = *std::move(url);
    frame.key =
        FrameKey{tab->page_url, e.frame_url, tab->profile, tab->crawl_iter};

    FrameRecord& record = output_.frames[frame.key];
    record.party = ClassifyParty(frame.url, tab->top, rules_);
    record.is_ad = record.is_ad || e.is_ad.value_or(IsAdUrl(e.frame_url, ads_));

    tab->frames.insert_or_assign(e.frame_id, std::move(frame));
    return absl::OkStatus();
  }

  absl::Status Handle(size_t index, const event::HttpRequest& e) {
    ASSIGN_OR_RETURN(TabState * tab, OpenTab(index, e.tab));
    ASSIGN_OR_RETURN(FrameState * frame, KnownFrame(index, *tab, e.frame_id));
    if (!ConditionHolds(e.when, *frame)) return absl::OkStatus();
    absl::StatusOr<Url> dest = ParseUrl(e.dest_url);
    if (!dest.ok()) return EventError(index, FromAbsl(dest.status().message()));

    PartitionStore& store = stores_[tab->profile];
    const PartitionKey key = ResolvePartition(
        policy_, tab->top, tab->load_key, *dest, rules_, options_.partition);
    const auto cookies = store.CookiesForRequest(key, *dest, now_);
    if (ClassifyParty(*dest, tab->top, rules_) == Party::kThird) {
      const std::string top_site = SiteForHost(tab->top.host, rules_);
      const std::string third_party_site = SiteForHost(dest->host, rules_);
      for (const auto& [name, value] : cookies) {
        output_.flows.emplace_back(
            index,
            CookieFlowRecord{tab->profile, tab->crawl_iter, tab->visit_seq,
                             top_site, third_party_site, name, value});
      }
    }
    for (const std::string& header : e.response_set_cookies) {
      store.ApplySetCookie(key, header, *dest, now_);
    }
    Log(index, StrCat("http ", e.dest_url, " under ", PartitionKeyToString(key),
                      " sent ", cookies.size(), " set ",
                      e.response_set_cookies.size()));
    return absl::OkStatus();
  }

  absl::Status Handle(size_t index, const event::ScriptStorage& e) {
    ASSIGN_OR_RETURN(TabState * tab, OpenTab(index, e.tab));
    ASSIGN_OR_RETURN(FrameState * frame, KnownFrame(index, *tab, e.frame_id));
    if (!ConditionHolds(e.when, *frame)) return absl::OkStatus();

    const PartitionKey key =
        ResolvePartition(policy_, tab->top, tab->load_key, frame->url, rules_,
                         options_.partition);
    StorageRequest request;
    request.key = e.key;
    request.value = e.value;
    request.subject_url = frame->url;
    request.now = now_;
    request.session_scope = SessionScope{e.tab, tab->load_key};
    std::optional<std::string> result =
        stores_[tab->profile].Access(key, e.op, e.api, request);
    if (e.op == StorageOp::kGet) frame->last_read_present = result.has_value();
    Log(index,
        StrCat(StorageOpName(e.op), " ", StorageApiName(e.api), "[", e.key,
               "] under ", PartitionKeyToString(key),
               e.op == StorageOp::kGet ? (result ? " -> present" : " -> absent")
                                       : ""));
    return absl::OkStatus();
  }

  absl::Status Handle(size_t index, const event::BehaviorEdge& e) {
    ASSIGN_OR_RETURN(TabState * tab, OpenTab(index, e.tab));
    ASSIGN_OR_RETURN(FrameState * frame, KnownFrame(index, *tab, e.frame_id));
    if (!ConditionHolds(e.when, *frame)) return absl::OkStatus();
    output_.frames[frame->key].edges.insert(CanonicalEdge(e.edge));
    return absl::OkStatus();
  }

  absl::Status Handle(size_t index, const event::VisitEnd& e) {
    ASSIGN_OR_RETURN(TabState * tab, OpenTab(index, e.tab));
    EndLoad(*tab);
    return absl::OkStatus();
  }

  const PolicyKind policy_;
  const SuffixRuleSet& rules_;
  const AdRuleSet& ads_;
  const ReplayOptions options_;

  Timestamp now_ = 0;
  std::map<std::string, TabState> tabs_;
  std::map<std::string, PartitionStore> stores_;
  std::map<std::string, int64_t> last_visit_seq_;
  PartialOutput output_;
};

std::string_view EventTab(const TraceEvent& event) {
  return std::visit([](const auto& e) -> std::string_view { return e.tab; },
                    event);
}

// Assigns every event to the profile owning its tab at that point. Events on
// a tab that never started a visit stay with the first worker, which reports
// the error.
std::map<std::string, std::vector<size_t>> PartitionByProfile(
    const Trace& trace) {
  std::map<std::string, std::vector<size_t>> by_profile;
  std::map<std::string, std::string, std::less<>> tab_profile;
  for (size_t i = 0; i < trace.size(); ++i) {
    std::string profile;
    if (const auto* start = std::get_if<event::VisitStart>(&trace[i])) {
      tab_profile[start->tab] = start->profile;
      profile = start->profile;
    } else if (auto it = tab_profile.find(EventTab(trace[i]));
               it != tab_profile.end()) {
      profile = it->second;
    }
    by_profile[profile].push_back(i);
  }
  return by_profile;
}

SimOutput Merge(std::vector<PartialOutput> parts) {
  std::vector<std::pair<size_t, CookieFlowRecord>> flows;
  std::vector<std::pair<size_t, std::string>> log;
  SimOutput output;
  for (PartialOutput& part : parts) {
    std::move(part.flows.begin(), part.flows.end(), std::back_inserter(flows));
    std::move(part.log.begin(), part.log.end(), std::back_inserter(log));
    output.frames.merge(part.frames);
  }
  // Within one event flows are already in attach order; stable sort keeps it.
  std::stable_sort(
      flows.begin(), flows.end(),
      [](const auto& a, const auto& b) { return a.first < b.first; });
  std::stable_sort(log.begin(), log.end(), [](const auto& a, const auto& b) {
    return a.first < b.first;
  });
  for (auto& [index, flow] : flows) output.flows.push_back(std::move(flow));
  for (auto& [index, line] : log) {
    output.storage_op_log.push_back(StrCat(index, ": ", line));
  }
  return output;
}

}  // namespace

absl::StatusOr<SimOutput> Replay(const Trace& trace, PolicyKind policy,
                                 const SuffixRuleSet& rules,
                                 const AdRuleSet& ads,
                                 const ReplayOptions& options) {
  if (options.jobs <= 1) {
    std::vector<size_t> all(trace.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    Replayer replayer(policy, rules, ads, options);
    RETURN_IF_ERROR(replayer.Run(trace, all));
    std::vector<PartialOutput> parts;
    parts.push_back(replayer.TakeOutput());
    return Merge(std::move(parts));
  }

  std::map<std::string, std::vector<size_t>> by_profile =
      PartitionByProfile(trace);
  std::vector<std::vector<size_t>*> work;
  for (auto& [profile, indices] : by_profile) work.push_back(&indices);

  std::vector<PartialOutput> parts(work.size());
  std::vector<absl::Status> statuses(work.size());
  const size_t workers =
      std::min<size_t>(static_cast<size_t>(options.jobs), work.size());
  std::vector<std::thread> threads;
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (size_t i = w; i < work.size(); i += workers) {
        Replayer replayer(policy, rules, ads, options);
        statuses[i] = replayer.Run(trace, *work[i]);
        parts[i] = replayer.TakeOutput();
      }
    });
  }
  for (std::thread& thread : threads) thread.join();

  // Serial replay reports the earliest failing event.
  for (const absl::Status& status : statuses) {
    if (status.ok()) continue;
    ReplayOptions serial = options;
    serial.jobs = 1;
    absl::StatusOr<SimOutput> rerun = Replay(trace, policy, rules, ads, serial);
    return rerun.ok() ? status : rerun.status();
  }
  return Merge(std::move(parts));
}

}  // namespace storagelab
