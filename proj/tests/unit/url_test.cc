#include "storagelab/url.h"

#include <gtest/gtest.h>

namespace storagelab {
namespace {

TEST(ParseUrlTest, SplitsComponents) {
  absl::StatusOr<Url> url =
      ParseUrl("HTTPS://WWW.Example.COM.:8443/a/b?q=1#frag");
  ASSERT_TRUE(url.ok()) << url.status();
  EXPECT_EQ(url->scheme, "https");
  EXPECT_EQ(url->host, "www.example.com");
  EXPECT_EQ(url->port, 8443);
  EXPECT_EQ(url->path, "/a/b");
  EXPECT_EQ(url->query, "q=1");
  EXPECT_EQ(url->Origin(), "https://www.example.com:8443");
}

TEST(ParseUrlTest, EmptyPathBecomesSlash) {
  absl::StatusOr<Url> url = ParseUrl("http://example.com");
  ASSERT_TRUE(url.ok());
  EXPECT_EQ(url->path, "/");
  EXPECT_FALSE(url->port.has_value());
}

TEST(ParseUrlTest, Ipv6Literal) {
  absl::StatusOr<Url> url = ParseUrl("http://[::1]:8080/x");
  ASSERT_TRUE(url.ok()) << url.status();
  EXPECT_EQ(url->host, "[::1]");
  EXPECT_EQ(url->port, 8080);
  EXPECT_TRUE(IsIpAddress(url->host));
}

TEST(ParseUrlTest, RejectsMalformed) {
  EXPECT_FALSE(ParseUrl("").ok());
  EXPECT_FALSE(ParseUrl("example.com/path").ok());
  EXPECT_FALSE(ParseUrl("https://").ok());
  EXPECT_FALSE(ParseUrl("https://user:pw@example.com/").ok());
  EXPECT_FALSE(ParseUrl("https://example.com:99999/").ok());
  EXPECT_FALSE(ParseUrl("https://example.com:port/").ok());
}

TEST(IsIpAddressTest, Ipv4) {
  EXPECT_TRUE(IsIpAddress("192.168.0.1"));
  EXPECT_FALSE(IsIpAddress("192.168.0"));
  EXPECT_FALSE(IsIpAddress("256.1.1.1"));
  EXPECT_FALSE(IsIpAddress("example.com"));
}

}  // namespace
}  // namespace storagelab
