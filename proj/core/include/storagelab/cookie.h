#ifndef STORAGELAB_COOKIE_H_
#define STORAGELAB_COOKIE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "storagelab/url.h"

namespace storagelab {

// Seconds on the simulator's virtual clock.
using Timestamp = int64_t;

struct Cookie {
  std::string name;
  std::string value;
  std::string domain;  // lowercase, no leading dot
  bool host_only = true;
  std::string path = "/";
  std::optional<Timestamp> expiry;  // nullopt: session cookie
  uint64_t created_seq = 0;         // assigned by CookieJar

  bool ExpiredAt(Timestamp now) const {
    return expiry.has_value() && *expiry <= now;
  }

  friend bool operator==(const Cookie&, const Cookie&) = default;
};

// Parses the value of a Set-Cookie header received for `request_url` at
// virtual time `now` (RFC 6265 section 5.2 subset). Recognized attributes are
// Domain, Path, Expires and Max-Age (Max-Age wins); Secure, HttpOnly,
// SameSite and anything else are ignored. Returns nullopt when the cookie
// must be dropped: empty or malformed name, or a Domain attribute that does
// not domain-match the request host.
std::optional<Cookie> ParseSetCookie(std::string_view header,
                                     const Url& request_url, Timestamp now);

// RFC 6265 section 5.1.3: `host` equals `cookie_domain`, or ends with
// "." + `cookie_domain`.
bool DomainMatch(std::string_view host, std::string_view cookie_domain);

// RFC 6265 section 5.1.4.
bool PathMatch(std::string_view request_path, std::string_view cookie_path);
std::string DefaultPath(std::string_view request_path);

// Parses an HTTP-date Expires attribute ("Wed, 21 Oct 2015 07:28:00 GMT" or
// the dashed Netscape variant) into seconds since the epoch.
std::optional<Timestamp> ParseCookieDate(std::string_view text);

// At most one cookie per (name, domain, path). Single-writer value type.
class CookieJar {
 public:
  using Key = std::tuple<std::string, std::string, std::string>;

  // Stores `cookie`, replacing any cookie with the same key. A cookie that is
  // already expired at `now` deletes the existing entry instead.
  void Set(Cookie cookie, Timestamp now);

  // ParseSetCookie + Set. Returns false when the header was rejected.
  bool SetFromHeader(std::string_view header, const Url& request_url,
                     Timestamp now);

  // Cookies to attach to a request for `url`: domain-matching (exactly for
  // host-only cookies), path-matching and unexpired. Longer paths first, then
  // earlier creation. Expired cookies are purged as a side effect.
  std::vector<std::pair<std::string, std::string>> CookiesForRequest(
      const Url& url, Timestamp now);

  bool Remove(const Key& key) { return cookies_.erase(key) > 0; }
  void PurgeExpired(Timestamp now);
  void Clear() { cookies_.clear(); }

  size_t size() const { return cookies_.size(); }
  bool empty() const { return cookies_.empty(); }
  const std::map<Key, Cookie>& cookies() const { return cookies_; }

 private:
  std::map<Key, Cookie> cookies_;
  uint64_t next_seq_ = 0;
};

}  // namespace storagelab

#endif  // STORAGELAB_COOKIE_H_
