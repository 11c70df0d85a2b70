#include "oracles.h"

#include <algorithm>

#include "storagelab/trace.h"

namespace storagelab::testing {
namespace {

bool Has(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

std::pair<int64_t, int64_t> BruteForceIntersectionUnion(
    const std::vector<int>& a, const std::vector<int>& b, int universe) {
  int64_t intersection = 0;
  int64_t union_size = 0;
  for (int x = 0; x < universe; ++x) {
    const bool in_a = Has(a, x);
    const bool in_b = Has(b, x);
    if (in_a && in_b) ++intersection;
    if (in_a || in_b) ++union_size;
  }
  return {intersection, union_size};
}

std::set<std::string> HandListedTrackerEdges(const std::string& tracker_site,
                                             bool with_storage) {
  const std::string frame = "https://" + tracker_site + "/widget";
  const std::string collect = "https://" + tracker_site + "/collect";
  std::set<std::string> edges = {
      "FrameOwner|iframe|load|DomRoot|" + frame,
      "DomRoot|" + frame + "|execute|Script|widget.js",
      "Script|widget.js|call|JsBuiltin|Date.now",
      "Script|widget.js|request|HttpResource|" + collect,
      "Script|widget.js|insert|HtmlElement|div#widget",
  };
  if (with_storage) {
    edges.insert("Script|widget.js|read|CookieJar|uid");
    edges.insert("Script|widget.js|write|LocalStorage|uid_seen");
  }
  return edges;
}

std::vector<GradeCell> HandWorkedKappaCells() {
  std::vector<GradeCell> cells;
  auto add = [&](int a, int b) {
    cells.push_back({"https://c" + std::to_string(cells.size()) + ".test/",
                     "page-length", a, b});
  };
  for (int i = 0; i < 7; ++i) add(1, 1);
  add(1, 2);
  add(2, 2);
  add(3, 3);
  return cells;
}

std::vector<GradeCell> BreakageTable(const std::vector<std::string>& profiles,
                                     const std::vector<int>& broken, int n) {
  std::vector<GradeCell> cells;
  for (size_t p = 0; p < profiles.size(); ++p) {
    for (int u = 0; u < n; ++u) {
      GradeCell cell;
      cell.url = "https://candidate" + std::to_string(u) + ".test/";
      cell.profile = profiles[p];
      // Broken cells alternate which grader noticed, and how badly, so the
      // consensus (max) rule is what makes them count.
      if (u < broken[p]) {
        cell.grader_a = u % 2 == 0 ? 3 : 1;
        cell.grader_b = 2;
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

std::vector<SampleInstance> StorageOnlySample() {
  const char* const storage_edges[] = {
      "Script|s.js|read|CookieJar|uid",
      "Script|s.js|write|LocalStorage|uid_seen",
      "Script|s.js|write|SessionStorage|tab_id",
  };
  std::vector<SampleInstance> sample;
  for (int i = 0; i < 3; ++i) {
    const std::string n = std::to_string(i);
    const EdgeSet shared = {
        "Script|s.js|call|Script|helper" + n + ".js",
        "Script|s.js|request|HttpResource|https://t" + n + ".net/c",
    };
    SampleInstance instance;
    instance.key = {"https://www.site" + n + ".com/", "https://t" + n + ".net/",
                    1};
    instance.base = shared;
    instance.base.insert(storage_edges[i]);
    instance.peer = instance.base;
    instance.contrast = shared;
    sample.push_back(std::move(instance));
  }
  return sample;
}

}  // namespace storagelab::testing
