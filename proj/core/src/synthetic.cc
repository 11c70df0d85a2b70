#include "storagelab/synthetic.h"

#include <random>

#include "absl/status/status.h"
#include "strings.h"

namespace storagelab {
namespace {

constexpr std::string_view kTokenAlphabet =
    "0123456789abcdefghijklmnopqrstuvwxyz";
constexpr int kTokenLength = 16;

// Raw engine output only: std::*_distribution results are not portable
// across standard libraries.
class Randomness {
 public:
  explicit Randomness(uint64_t seed) : engine_(seed) {}

  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::string Token() {
    std::string token(kTokenLength, '0');
    for (char& c : token) c = kTokenAlphabet[engine_() % kTokenAlphabet.size()];
    return token;
  }

 private:
  std::mt19937_64 engine_;
};

BehaviorEdgeRecord Edge(NodeType source, std::string source_key,
                        std::string edge_type, NodeType target,
                        std::string target_key) {
  return BehaviorEdgeRecord{source, std::move(source_key), std::move(edge_type),
                            target, std::move(target_key)};
}

std::string PageUrl(int site, int page) {
  if (page == 0) return StrCat("https://www.site", site, ".com/");
  return StrCat("https://www.site", site, ".com/page", page);
}

class TraceBuilder {
 public:
  explicit TraceBuilder(Trace* trace) : trace_(trace) {}

  void Add(TraceEvent event) { trace_->push_back(std::move(event)); }

  void AddEdge(const std::string& tab, const std::string& frame,
               BehaviorEdgeRecord edge, Condition when = Condition::kAlways) {
    Add(event::BehaviorEdge{tab, frame, std::move(edge), when});
  }

  void AddStorage(const std::string& tab, const std::string& frame,
                  StorageApi api, StorageOp op, std::string key,
                  std::string value = "", Condition when = Condition::kAlways) {
    Add(event::ScriptStorage{tab, frame, api, op, std::move(key),
                             std::move(value), when});
  }

 private:
  Trace* trace_;
};

void EmitMainFrame(TraceBuilder& b, const std::string& tab,
                   const std::string& page_url, int site,
                   const std::vector<std::string>& embedded_frames,
                   Randomness& tokens) {
  const std::string frame = "main";
  const std::string origin = StrCat("https://www.site", site, ".com");
  b.Add(event::FrameLoad{tab, frame, page_url, std::nullopt});
  b.AddStorage(tab, frame, StorageApi::kLocal, StorageOp::kGet, "visited");
  b.Add(event::HttpRequest{
      tab,
      frame,
      StrCat(origin, "/app.js"),
      {StrCat("sid=", tokens.Token(), "; Path=/; Max-Age=86400")},
      Condition::kReadAbsent});
  b.AddEdge(tab, frame,
            Edge(NodeType::kDomRoot, page_url, "insert", NodeType::kHtmlElement,
                 "body"));
  b.AddEdge(tab, frame,
            Edge(NodeType::kHtmlElement, "body", "insert", NodeType::kTextNode,
                 "headline"));
  b.AddEdge(tab, frame,
            Edge(NodeType::kScript, "app.js", "call", NodeType::kWebApi,
                 "document.querySelector"));
  b.AddEdge(tab, frame,
            Edge(NodeType::kScript, "app.js", "request",
                 NodeType::kHttpResource, StrCat(origin, "/app.js")));
  b.AddEdge(tab, frame,
            Edge(NodeType::kScript, "app.js", "read", NodeType::kLocalStorage,
                 "visited"),
            Condition::kReadPresent);
  b.AddStorage(tab, frame, StorageApi::kLocal, StorageOp::kSet, "visited", "1");
  b.AddEdge(tab, frame,
            Edge(NodeType::kScript, "app.js", "write", NodeType::kLocalStorage,
                 "visited"));
  for (const std::string& frame_url : embedded_frames) {
    b.AddEdge(tab, frame,
              Edge(NodeType::kDomRoot, page_url, "insert",
                   NodeType::kFrameOwner, frame_url));
  }
}

void EmitTrackerFrame(TraceBuilder& b, const std::string& tab,
                      const std::string& frame, const std::string& site,
                      bool adaptive, Randomness& tokens) {
  const std::string base = StrCat("https://", site);
  const std::string frame_url = StrCat(base, "/widget");
  const std::string collect_url = StrCat(base, "/collect");
  const Condition storage_guard =
      adaptive ? Condition::kReadPresent : Condition::kAlways;

  b.Add(event::FrameLoad{tab, frame, frame_url, std::nullopt});
  b.AddStorage(tab, frame, StorageApi::kCookie, StorageOp::kGet, "uid");
  b.Add(event::HttpRequest{tab,
                           frame,
                           StrCat(base, "/id"),
                           {StrCat("uid=", tokens.Token(), "; Domain=", site,
                                   "; Path=/; Max-Age=31536000")},
                           Condition::kReadAbsent});
  b.AddStorage(tab, frame, StorageApi::kCookie, StorageOp::kGet, "uid");
  b.Add(event::HttpRequest{tab, frame, collect_url, {}, Condition::kAlways});

  b.AddEdge(tab, frame,
            Edge(NodeType::kFrameOwner, "iframe", "load", NodeType::kDomRoot,
                 frame_url));
  b.AddEdge(tab, frame,
            Edge(NodeType::kDomRoot, frame_url, "execute", NodeType::kScript,
                 "widget.js"));
  b.AddEdge(tab, frame,
            Edge(NodeType::kScript, "widget.js", "call", NodeType::kJsBuiltin,
                 "Date.now"));
  b.AddEdge(tab, frame,
            Edge(NodeType::kScript, "widget.js", "request",
                 NodeType::kHttpResource, collect_url));
  b.AddEdge(tab, frame,
            Edge(NodeType::kScript, "widget.js", "insert",
                 NodeType::kHtmlElement, "div#widget"));

  b.AddEdge(
      tab, frame,
      Edge(NodeType::kScript, "widget.js", "read", NodeType::kCookieJar, "uid"),
      storage_guard);
  b.AddStorage(tab, frame, StorageApi::kLocal, StorageOp::kSet, "uid_seen", "1",
               storage_guard);
  b.AddEdge(tab, frame,
            Edge(NodeType::kScript, "widget.js", "write",
                 NodeType::kLocalStorage, "uid_seen"),
            storage_guard);
}

void EmitAdFrame(TraceBuilder& b, const std::string& tab, int site) {
  const std::string frame = "ad";
  const std::string url = StrCat("https://ads.adnet.net/banner/", site);
  b.Add(event::FrameLoad{tab, frame, url, std::nullopt});
  b.AddEdge(
      tab, frame,
      Edge(NodeType::kDomRoot, url, "execute", NodeType::kScript, "ad.js"));
}

}  // namespace

std::vector<TrackerSpec> DefaultTrackers(int count) {
  std::vector<TrackerSpec> trackers;
  for (int j = 0; j < count; ++j) {
    trackers.push_back(TrackerSpec{StrCat("tracker", j, ".net")});
  }
  return trackers;
}

absl::StatusOr<Trace> GenerateSyntheticTrace(const SyntheticTraceSpec& spec) {
  if (spec.n_sites <= 0)
    return absl::InvalidArgumentError("n_sites must be > 0");
  if (spec.profiles <= 0) {
    return absl::InvalidArgumentError("profiles must be > 0");
  }
  if (spec.pages_per_site <= 0) {
    return absl::InvalidArgumentError("pages_per_site must be > 0");
  }
  if (spec.crawl_iters <= 0) {
    return absl::InvalidArgumentError("crawl_iters must be > 0");
  }
  for (const TrackerSpec& tracker : spec.trackers) {
    if (tracker.site.empty()) {
      return absl::InvalidArgumentError("tracker site must be non-empty");
    }
    if (!tracker.embed_all && !(tracker.embed_probability >= 0.0 &&
                                tracker.embed_probability <= 1.0)) {
      return absl::InvalidArgumentError(
          StrCat("embed_probability for ", tracker.site, " must be in [0, 1]"));
    }
  }

  // Embedding is a property of the page, drawn once so every profile and
  // iteration sees the same page content.
  Randomness layout(spec.seed);
  std::vector<std::vector<std::vector<bool>>> embeds(
      spec.n_sites, std::vector<std::vector<bool>>(spec.pages_per_site));
  for (int site = 0; site < spec.n_sites; ++site) {
    for (int page = 0; page < spec.pages_per_site; ++page) {
      for (const TrackerSpec& tracker : spec.trackers) {
        const double draw = layout.Uniform01();
        embeds[site][page].push_back(tracker.embed_all ||
                                     draw < tracker.embed_probability);
      }
    }
  }

  Randomness tokens(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  Trace trace;
  TraceBuilder b(&trace);
  std::vector<int64_t> visit_seq(spec.profiles, 0);
  for (int iter = 1; iter <= spec.crawl_iters; ++iter) {
    for (int p = 0; p < spec.profiles; ++p) {
      const std::string profile = StrCat("p", p + 1);
      const std::string tab = StrCat("tab-", profile);
      for (int site = 0; site < spec.n_sites; ++site) {
        for (int page = 0; page < spec.pages_per_site; ++page) {
          const std::string page_url = PageUrl(site, page);
          b.Add(
              event::VisitStart{profile, iter, tab, page_url, ++visit_seq[p]});
          std::vector<std::string> embedded;
          for (size_t j = 0; j < spec.trackers.size(); ++j) {
            if (embeds[site][page][j]) {
              embedded.push_back(
                  StrCat("https://", spec.trackers[j].site, "/widget"));
            }
          }
          EmitMainFrame(b, tab, page_url, site, embedded, tokens);
          for (size_t j = 0; j < spec.trackers.size(); ++j) {
            if (!embeds[site][page][j]) continue;
            EmitTrackerFrame(b, tab, StrCat("t", j), spec.trackers[j].site,
                             spec.adaptive, tokens);
          }
          if (spec.include_ad_frame) EmitAdFrame(b, tab, site);
          b.Add(event::VisitEnd{tab});
        }
      }
    }
  }
  return trace;
}

}  // namespace storagelab
