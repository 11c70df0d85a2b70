#include "storagelab/filterlist.h"

#include "storagelab/cookie.h"
#include "storagelab/url.h"
#include "strings.h"

namespace storagelab {
namespace {

bool IsHostChar(char c) {
  return absl::ascii_isalnum(static_cast<unsigned char>(c)) || c == '.' ||
         c == '-';
}

}  // namespace

AdRuleSet ParseAdRules(std::string_view text) {
  AdRuleSet rules;
  for (std::string_view line : StrSplit(text, '\n')) {
    line = StripAsciiWhitespace(line);
    if (line.empty() || StartsWith(line, "!") || StartsWith(line, "[")) {
      continue;  // comments and the "[Adblock Plus 2.0]" header
    }
    if (StartsWith(line, "@@") || StrContains(line, "##") ||
        StrContains(line, "#@#") || StrContains(line, "#?#") ||
        StrContains(line, '$')) {
      ++rules.skipped_rules;
      continue;
    }
    if (line.size() > 2 && line.front() == '/' && line.back() == '/') {
      ++rules.skipped_rules;  // regex rule
      continue;
    }

    std::string rule = AsciiStrToLower(line);
    std::string_view body = rule;
    if (ConsumePrefix(&body, "||")) {
      ConsumeSuffix(&body, "^");
      bool plain_host = !body.empty();
      for (char c : body) plain_host = plain_host && IsHostChar(c);
      if (plain_host) {
        rules.domain_anchor_rules.insert(std::string(body));
      } else {
        ++rules.skipped_rules;
      }
      continue;
    }
    if (StartsWith(body, "|") || StrContains(body, '^')) {
      ++rules.skipped_rules;
      continue;
    }
    rules.substring_rules.push_back(std::string(body));
  }
  return rules;
}

bool WildcardContains(std::string_view text, std::string_view pattern) {
  // Iterative glob match of "*" + pattern + "*" with single-star backtracking.
  size_t t = 0;
  size_t p = 0;
  size_t star_p = 0;  // implicit leading star
  size_t star_t = 0;
  while (true) {
    if (p == pattern.size()) return true;  // implicit trailing star
    if (pattern[p] == '*') {
      star_p = ++p;
      star_t = t;
      continue;
    }
    if (t < text.size() && text[t] == pattern[p]) {
      ++t;
      ++p;
      continue;
    }
    if (star_t >= text.size()) return false;
    p = star_p;
    t = ++star_t;
  }
}

bool IsAdUrl(std::string_view url, const AdRuleSet& rules) {
  if (!rules.domain_anchor_rules.empty()) {
    if (absl::StatusOr<Url> parsed = ParseUrl(url); parsed.ok()) {
      for (const std::string& domain : rules.domain_anchor_rules) {
        if (DomainMatch(parsed->host, domain)) return true;
      }
    }
  }
  if (rules.substring_rules.empty()) return false;
  const std::string lowered = AsciiStrToLower(url);
  for (const std::string& pattern : rules.substring_rules) {
    if (WildcardContains(lowered, pattern)) return true;
  }
  return false;
}

}  // namespace storagelab
