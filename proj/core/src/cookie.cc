#include "storagelab/cookie.h"

#include <algorithm>
#include <limits>

#include "absl/time/time.h"
#include "strings.h"

namespace storagelab {
namespace {

bool ValidCookieName(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (c == '=' || c == ';' ||
        absl::ascii_isspace(static_cast<unsigned char>(c)) ||
        absl::ascii_iscntrl(static_cast<unsigned char>(c))) {
      return false;
    }
  }
  return true;
}

Timestamp SaturatingAdd(Timestamp now, int64_t delta) {
  if (delta > 0 && now > std::numeric_limits<Timestamp>::max() - delta) {
    return std::numeric_limits<Timestamp>::max();
  }
  return now + delta;
}

}  // namespace

bool DomainMatch(std::string_view host, std::string_view cookie_domain) {
  if (host == cookie_domain) return true;
  return cookie_domain.size() < host.size() && EndsWith(host, cookie_domain) &&
         host[host.size() - cookie_domain.size() - 1] == '.';
}

bool PathMatch(std::string_view request_path, std::string_view cookie_path) {
  if (request_path == cookie_path) return true;
  if (!StartsWith(request_path, cookie_path)) return false;
  return cookie_path.back() == '/' || request_path[cookie_path.size()] == '/';
}

std::string DefaultPath(std::string_view request_path) {
  if (request_path.empty() || request_path.front() != '/') return "/";
  const size_t last_slash = request_path.rfind('/');
  if (last_slash == 0) return "/";
  return std::string(request_path.substr(0, last_slash));
}

std::optional<Timestamp> ParseCookieDate(std::string_view text) {
  static constexpr const char* kFormats[] = {
      "%a, %d %b %Y %H:%M:%S GMT",
      "%a, %d-%b-%Y %H:%M:%S GMT",
      "%a, %d %b %Y %H:%M:%S UTC",
  };
  const std::string input(StripAsciiWhitespace(text));
  for (const char* format : kFormats) {
    absl::Time parsed;
    std::string error;
    if (absl::ParseTime(format, input, absl::UTCTimeZone(), &parsed, &error)) {
      return absl::ToUnixSeconds(parsed);
    }
  }
  return std::nullopt;
}

std::optional<Cookie> ParseSetCookie(std::string_view header,
                                     const Url& request_url, Timestamp now) {
  std::vector<std::string_view> parts = StrSplit(header, ';');
  std::string_view pair = parts.front();
  const size_t eq = pair.find('=');
  if (eq == std::string_view::npos) return std::nullopt;

  Cookie cookie;
  cookie.name = std::string(StripAsciiWhitespace(pair.substr(0, eq)));
  cookie.value = std::string(StripAsciiWhitespace(pair.substr(eq + 1)));
  if (!ValidCookieName(cookie.name)) return std::nullopt;

  std::optional<std::string> domain_attr;
  std::optional<std::string> path_attr;
  std::optional<Timestamp> expires;
  std::optional<Timestamp> max_age_expiry;

  for (size_t i = 1; i < parts.size(); ++i) {
    std::string_view attr = parts[i];
    const size_t attr_eq = attr.find('=');
    const std::string name =
        AsciiStrToLower(StripAsciiWhitespace(attr.substr(0, attr_eq)));
    std::string_view value =
        attr_eq == std::string_view::npos
            ? std::string_view()
            : StripAsciiWhitespace(attr.substr(attr_eq + 1));

    if (name == "domain") {
      std::string_view domain = value;
      ConsumePrefix(&domain, ".");
      if (!domain.empty()) domain_attr = AsciiStrToLower(domain);
    } else if (name == "path") {
      if (!value.empty() && value.front() == '/') {
        path_attr = std::string(value);
      } else {
        path_attr.reset();  // invalid Path falls back to the default path
      }
    } else if (name == "max-age") {
      int64_t seconds = 0;
      bool digits_only = !value.empty();
      std::string_view digits = value;
      ConsumePrefix(&digits, "-");
      for (char c : digits) {
        if (!absl::ascii_isdigit(static_cast<unsigned char>(c))) {
          digits_only = false;
        }
      }
      if (digits_only && !digits.empty() && SimpleAtoi(value, &seconds)) {
        max_age_expiry = seconds <= 0 ? std::numeric_limits<Timestamp>::min()
                                      : SaturatingAdd(now, seconds);
      }
    } else if (name == "expires") {
      if (auto parsed = ParseCookieDate(value); parsed.has_value()) {
        expires = parsed;
      }
    }
  }

  if (max_age_expiry.has_value()) {
    cookie.expiry = max_age_expiry;
  } else {
    cookie.expiry = expires;
  }

  if (domain_attr.has_value()) {
    if (!DomainMatch(request_url.host, *domain_attr)) return std::nullopt;
    cookie.domain = *domain_attr;
    cookie.host_only = false;
  } else {
    cookie.domain = request_url.host;
    cookie.host_only = true;
  }
  cookie.path = path_attr.value_or(DefaultPath(request_url.path));
  return cookie;
}

void CookieJar::Set(Cookie cookie, Timestamp now) {
  Key key{cookie.name, cookie.domain, cookie.path};
  if (cookie.ExpiredAt(now)) {
    cookies_.erase(key);
    return;
  }
  cookie.created_seq = next_seq_++;
  cookies_.insert_or_assign(std::move(key), std::move(cookie));
}

bool CookieJar::SetFromHeader(std::string_view header, const Url& request_url,
                              Timestamp now) {
  std::optional<Cookie> cookie = ParseSetCookie(header, request_url, now);
  if (!cookie.has_value()) return false;
  Set(*std::move(cookie), now);
  return true;
}

void CookieJar::PurgeExpired(Timestamp now) {
  std::erase_if(cookies_, [now](const auto& entry) {
    return entry.second.ExpiredAt(now);
  });
}

std::vector<std::pair<std::string, std::string>> CookieJar::CookiesForRequest(
    const Url& url, Timestamp now) {
  PurgeExpired(now);
  std::vector<const Cookie*> matches;
  for (const auto& [key, cookie] : cookies_) {
    const bool domain_ok = cookie.host_only
                               ? url.host == cookie.domain
                               : DomainMatch(url.host, cookie.domain);
    if (domain_ok && PathMatch(url.path, cookie.path)) {
      matches.push_back(&cookie);
    }
  }
  std::sort(matches.begin(), matches.end(),
            [](const Cookie* a, const Cookie* b) {
              if (a->path.size() != b->path.size()) {
                return a->path.size() > b->path.size();
              }
              return a->created_seq < b->created_seq;
            });
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(matches.size());
  for (const Cookie* cookie : matches) {
    out.emplace_back(cookie->name, cookie->value);
  }
  return out;
}

}  // namespace storagelab
