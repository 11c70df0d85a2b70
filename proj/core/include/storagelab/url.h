#ifndef STORAGELAB_URL_H_
#define STORAGELAB_URL_H_

#include <optional>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace storagelab {

// A deliberately small absolute-URL model: enough structure for party
// classification, cookie matching and partition keying. No percent-decoding
// and no IDN handling; hosts are ASCII-lowercased.
struct Url {
  std::string scheme;
  std::string host;
  std::optional<int> port;
  std::string path;   // always starts with '/'
  std::string query;  // without the leading '?'

  // scheme://host[:port]
  std::string Origin() const;
  std::string ToString() const;

  friend bool operator==(const Url&, const Url&) = default;
};

// Accepts "scheme://host[:port][/path][?query][#fragment]". Userinfo is
// rejected; an absent path becomes "/".
absl::StatusOr<Url> ParseUrl(std::string_view text);

// Dotted-quad IPv4 or bracketed IPv6 literal.
bool IsIpAddress(std::string_view host);

}  // namespace storagelab

#endif  // STORAGELAB_URL_H_
