#include "storagelab/trace.h"

#include <gtest/gtest.h>

#include <random>

#include "storagelab/synthetic.h"
#include "trace_builder.h"

namespace storagelab {
namespace {

TEST(NodeTypeTest, ElevenTypesRoundTrip) {
  EXPECT_EQ(std::size(kAllNodeTypes), 11u);
  for (NodeType type : kAllNodeTypes) {
    EXPECT_EQ(ParseNodeType(NodeTypeName(type)), type);
  }
  EXPECT_FALSE(ParseNodeType("Nope").has_value());
}

TEST(NodeTypeSetTest, Presets) {
  EXPECT_EQ(NodeTypeSet::All().size(), 11);
  const NodeTypeSet optimal = NodeTypeSet::Optimal();
  EXPECT_EQ(optimal.size(), 8);
  EXPECT_FALSE(optimal.contains(NodeType::kHtmlElement));
  EXPECT_FALSE(optimal.contains(NodeType::kTextNode));
  EXPECT_FALSE(optimal.contains(NodeType::kWebApi));
  EXPECT_TRUE(NodeTypeSet::All().Includes(optimal));
}

TEST(ParseNodeFilterTest, NamesAndLists) {
  EXPECT_EQ(*ParseNodeFilter("all"), NodeTypeSet::All());
  EXPECT_EQ(*ParseNodeFilter("optimal"), NodeTypeSet::Optimal());
  EXPECT_EQ(*ParseNodeFilter("Script, CookieJar"),
            (NodeTypeSet{NodeType::kScript, NodeType::kCookieJar}));
  EXPECT_FALSE(ParseNodeFilter("Script,Bogus").ok());
  EXPECT_FALSE(ParseNodeFilter("").ok());
}

TEST(CanonicalEdgeTest, EscapesSeparators) {
  BehaviorEdgeRecord edge{NodeType::kScript, "a|b%c", "call", NodeType::kWebApi,
                          "x%7Cy"};
  const std::string text = CanonicalEdge(edge);
  EXPECT_EQ(text, "Script|a%7Cb%25c|call|WebApi|x%257Cy");
  absl::StatusOr<BehaviorEdgeRecord> back = ParseCanonicalEdge(text);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, edge);
  auto types = CanonicalEdgeTypes(text);
  ASSERT_TRUE(types.ok());
  EXPECT_EQ(types->first, NodeType::kScript);
  EXPECT_EQ(types->second, NodeType::kWebApi);
}

TEST(CanonicalEdgeTest, RejectsMalformed) {
  EXPECT_FALSE(ParseCanonicalEdge("Script|a|call|WebApi").ok());
  EXPECT_FALSE(ParseCanonicalEdge("Bogus|a|call|WebApi|b").ok());
}

// Random printable strings with the separator and escape characters
// over-represented.
std::string RandomText(std::mt19937_64& rng) {
  static const char kAlphabet[] = "ab|%7C25 \"\\\n\t{}";
  std::string s;
  const size_t n = rng() % 8;
  for (size_t i = 0; i < n; ++i)
    s += kAlphabet[rng() % (sizeof(kAlphabet) - 1)];
  return s;
}

TEST(CanonicalEdgeTest, RoundTripProperty) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    BehaviorEdgeRecord edge{kAllNodeTypes[rng() % 11], RandomText(rng),
                            RandomText(rng), kAllNodeTypes[rng() % 11],
                            RandomText(rng)};
    absl::StatusOr<BehaviorEdgeRecord> back =
        ParseCanonicalEdge(CanonicalEdge(edge));
    ASSERT_TRUE(back.ok()) << CanonicalEdge(edge);
    EXPECT_EQ(*back, edge);
  }
}

TEST(TraceSerializationTest, RoundTripHandWritten) {
  const Trace trace =
      testing::TraceBuilder()
          .Visit("t", "https://a.com/", "p1", 2)
          .Frame("t", "main", "https://a.com/")
          .Frame("t", "ad", "https://ads.net/x", true)
          .Storage("t", "main", StorageApi::kSession, StorageOp::kSet, "k",
                   "v\"quoted\"", Condition::kReadAbsent)
          .Request("t", "main", "https://a.com/x", {"a=1; Path=/", "b=2"},
                   Condition::kReadPresent)
          .Edge("t", "main",
                {NodeType::kScript, "s", "call", NodeType::kJsBuiltin, "f"})
          .End("t")
          .Build();
  const std::string text = SerializeTrace(trace);
  absl::StatusOr<Trace> parsed = ParseTrace(text);
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(*parsed, trace);
  EXPECT_EQ(SerializeTrace(*parsed), text);
}

TEST(TraceSerializationTest, RoundTripSynthetic) {
  SyntheticTraceSpec spec;
  spec.n_sites = 4;
  spec.trackers = DefaultTrackers(2);
  spec.profiles = 2;
  spec.crawl_iters = 2;
  spec.include_ad_frame = true;
  spec.seed = 3;
  absl::StatusOr<Trace> trace = GenerateSyntheticTrace(spec);
  ASSERT_TRUE(trace.ok());
  absl::StatusOr<Trace> parsed = ParseTrace(SerializeTrace(*trace));
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(*parsed, *trace);
}

TEST(ParseTraceTest, ErrorsNameTheLine) {
  absl::StatusOr<Trace> trace = ParseTrace(
      "{\"type\":\"visit_end\",\"tab\":\"t\"}\n"
      "\n"
      "{\"type\":\"teleport\",\"tab\":\"t\"}\n");
  ASSERT_FALSE(trace.ok());
  EXPECT_NE(std::string(trace.status().message()).find("trace line 3"),
            std::string::npos)
      << trace.status();
  EXPECT_FALSE(ParseTrace("not json\n").ok());
  EXPECT_FALSE(ParseTrace("{\"type\":\"frame_load\",\"tab\":\"t\"}\n").ok());
}

TEST(ParseTraceTest, BlankLinesIgnored) {
  absl::StatusOr<Trace> trace =
      ParseTrace("\n{\"type\":\"visit_end\",\"tab\":\"t\"}\n\n");
  ASSERT_TRUE(trace.ok());
  EXPECT_EQ(trace->size(), 1u);
}

}  // namespace
}  // namespace storagelab
