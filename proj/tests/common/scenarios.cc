#include "scenarios.h"

#include "storagelab/filterlist.h"
#include "storagelab/psl.h"
#include "storagelab/simulator.h"
#include "trace_builder.h"

namespace storagelab::testing {
namespace {

constexpr char kWriterUrl[] = "https://tracker.net/writer";
constexpr char kReaderUrl[] = "https://tracker.net/reader";
constexpr char kFirstPartyUrl[] = "https://www.a.com/";

const BehaviorEdgeRecord kProbe{NodeType::kScript, "probe", "saw",
                                NodeType::kLocalStorage, "id"};

const StorageScenario kScenarios[] = {
    {"same-page-frames",
     "two frames of one third party on one page share a partition", true, false,
     true, true},
    {"two-tabs", "the same page open in two tabs", true, false, true, false},
    {"reload", "reloading the page", true, false, true, false},
    {"cross-first-party", "the third party embedded on another site", true,
     false, false, false},
    {"first-party-reload",
     "first-party storage of a reloaded page is unchanged", true, true, true,
     true},
};

void Write(TraceBuilder& b, const std::string& tab, const std::string& frame,
           StorageApi api) {
  b.Storage(tab, frame, api, StorageOp::kSet, "id", "abc123");
}

void Read(TraceBuilder& b, const std::string& tab, const std::string& frame,
          StorageApi api) {
  b.Storage(tab, frame, api, StorageOp::kGet, "id")
      .Edge(tab, frame, kProbe, Condition::kReadPresent);
}

}  // namespace

bool StorageScenario::Expected(PolicyKind policy) const {
  switch (policy) {
    case PolicyKind::kPermissive:
      return visible_permissive;
    case PolicyKind::kBlocking:
      return visible_blocking;
    case PolicyKind::kSiteKeyed:
      return visible_site_keyed;
    case PolicyKind::kPageLength:
      return visible_page_length;
  }
  return false;
}

std::span<const StorageScenario> StorageScenarios() { return kScenarios; }

Trace ScenarioTrace(const StorageScenario& scenario, StorageApi api) {
  TraceBuilder b;
  const std::string& name = scenario.name;
  if (name == "same-page-frames") {
    b.Visit("t1", kFirstPartyUrl)
        .Frame("t1", "w", kWriterUrl)
        .Frame("t1", "r", kReaderUrl);
    Write(b, "t1", "w", api);
    Read(b, "t1", "r", api);
    b.End("t1");
  } else if (name == "two-tabs") {
    b.Visit("t1", kFirstPartyUrl).Frame("t1", "w", kWriterUrl);
    Write(b, "t1", "w", api);
    b.Visit("t2", kFirstPartyUrl).Frame("t2", "r", kReaderUrl);
    Read(b, "t2", "r", api);
    b.End("t2").End("t1");
  } else if (name == "reload") {
    b.Visit("t1", kFirstPartyUrl).Frame("t1", "w", kWriterUrl);
    Write(b, "t1", "w", api);
    b.Visit("t1", kFirstPartyUrl).Frame("t1", "r", kReaderUrl);
    Read(b, "t1", "r", api);
    b.End("t1");
  } else if (name == "cross-first-party") {
    b.Visit("t1", kFirstPartyUrl).Frame("t1", "w", kWriterUrl);
    Write(b, "t1", "w", api);
    b.End("t1");
    b.Visit("t1", "https://www.b.com/").Frame("t1", "r", kReaderUrl);
    Read(b, "t1", "r", api);
    b.End("t1");
  } else if (name == "first-party-reload") {
    b.Visit("t1", kFirstPartyUrl).Frame("t1", "main", kFirstPartyUrl);
    Write(b, "t1", "main", api);
    b.Visit("t1", kFirstPartyUrl).Frame("t1", "main", kFirstPartyUrl);
    Read(b, "t1", "main", api);
    b.End("t1");
  }
  return b.Build();
}

absl::StatusOr<bool> ReaderSeesValue(const StorageScenario& scenario,
                                     StorageApi api, PolicyKind policy) {
  const Trace trace = ScenarioTrace(scenario, api);
  absl::StatusOr<SimOutput> output =
      Replay(trace, policy, SuffixRuleSet::Builtin(), AdRuleSet{});
  if (!output.ok()) return output.status();
  const std::string probe = CanonicalEdge(kProbe);
  for (const auto& [key, record] : output->frames) {
    if (record.edges.contains(probe)) return true;
  }
  return false;
}

}  // namespace storagelab::testing
