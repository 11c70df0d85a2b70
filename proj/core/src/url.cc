#include "storagelab/url.h"

#include <cctype>
#include <vector>

#include "absl/status/status.h"
#include "strings.h"

namespace storagelab {

std::string Url::Origin() const {
  std::string origin = StrCat(scheme, "://", host);
  if (port.has_value()) StrAppend(&origin, ":", *port);
  return origin;
}

std::string Url::ToString() const {
  std::string out = StrCat(Origin(), path);
  if (!query.empty()) StrAppend(&out, "?", query);
  return out;
}

absl::StatusOr<Url> ParseUrl(std::string_view text) {
  const size_t scheme_end = text.find("://");
  if (scheme_end == std::string_view::npos || scheme_end == 0) {
    return absl::InvalidArgumentError(
        StrCat("URL has no scheme: '", text, "'"));
  }
  Url url;
  url.scheme = AsciiStrToLower(text.substr(0, scheme_end));
  for (char c : url.scheme) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' &&
        c != '.') {
      return absl::InvalidArgumentError(StrCat("bad URL scheme: '", text, "'"));
    }
  }

  std::string_view rest = text.substr(scheme_end + 3);
  if (const size_t hash = rest.find('#'); hash != std::string_view::npos) {
    rest = rest.substr(0, hash);
  }
  const size_t authority_end = rest.find_first_of("/?");
  std::string_view authority = rest.substr(0, authority_end);
  std::string_view tail = authority_end == std::string_view::npos
                              ? std::string_view()
                              : rest.substr(authority_end);

  if (authority.find('@') != std::string_view::npos) {
    return absl::InvalidArgumentError(
        StrCat("userinfo is not supported: '", text, "'"));
  }

  std::string_view host = authority;
  if (!authority.empty() && authority.front() == '[') {
    const size_t close = authority.find(']');
    if (close == std::string_view::npos) {
      return absl::InvalidArgumentError(
          StrCat("unterminated IPv6 literal: '", text, "'"));
    }
    host = authority.substr(0, close + 1);
    std::string_view after = authority.substr(close + 1);
    if (!after.empty()) {
      if (after.front() != ':') {
        return absl::InvalidArgumentError(
            StrCat("bad authority: '", text, "'"));
      }
      int port = 0;
      if (!SimpleAtoi(after.substr(1), &port) || port < 0 || port > 65535) {
        return absl::InvalidArgumentError(StrCat("bad port: '", text, "'"));
      }
      url.port = port;
    }
  } else if (const size_t colon = authority.rfind(':');
             colon != std::string_view::npos) {
    host = authority.substr(0, colon);
    int port = 0;
    if (!SimpleAtoi(authority.substr(colon + 1), &port) || port < 0 ||
        port > 65535) {
      return absl::InvalidArgumentError(StrCat("bad port: '", text, "'"));
    }
    url.port = port;
  }
  if (host.empty()) {
    return absl::InvalidArgumentError(StrCat("URL has no host: '", text, "'"));
  }
  url.host = AsciiStrToLower(host);
  if (url.host.back() == '.') url.host.pop_back();
  if (url.host.empty()) {
    return absl::InvalidArgumentError(StrCat("URL has no host: '", text, "'"));
  }

  const size_t query_start = tail.find('?');
  std::string_view path = tail.substr(0, query_start);
  url.path = path.empty() ? "/" : std::string(path);
  if (query_start != std::string_view::npos) {
    url.query = std::string(tail.substr(query_start + 1));
  }
  return url;
}

bool IsIpAddress(std::string_view host) {
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') {
    return true;
  }
  std::vector<std::string_view> parts = StrSplit(host, '.');
  if (parts.size() != 4) return false;
  for (std::string_view part : parts) {
    if (part.empty() || part.size() > 3) return false;
    int value = 0;
    for (char c : part) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
      value = value * 10 + (c - '0');
    }
    if (value > 255) return false;
  }
  return true;
}

}  // namespace storagelab
