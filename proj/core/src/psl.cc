#include "storagelab/psl.h"

#include <vector>

#include "absl/status/status.h"
#include "storagelab/url.h"
#include "strings.h"

namespace storagelab {
namespace {

constexpr std::string_view kBuiltinPsl =
    R"(// Builtin subset of the Public Suffix List.
// ===BEGIN ICANN DOMAINS===
ac
biz
com
uk.com
edu
gov
info
io
net
org
de
fr
nl
ch
uk
co.uk
org.uk
ac.uk
gov.uk
au
com.au
net.au
br
com.br
in
co.in
cn
com.cn
xn--55qx5d.cn
xn--fiqs8s
us
ak.us
k12.ak.us
jp
ac.jp
co.jp
kyoto.jp
ide.kyoto.jp
*.kobe.jp
!city.kobe.jp
*.mm
*.ck
!www.ck
// ===END ICANN DOMAINS===
// ===BEGIN PRIVATE DOMAINS===
github.io
blogspot.com
// ===END PRIVATE DOMAINS===
)";

bool ValidRuleLabel(std::string_view label) {
  if (label.empty()) return false;
  for (char c : label) {
    if (absl::ascii_isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::vector<std::string_view> Labels(std::string_view host) {
  return StrSplit(host, '.');
}

std::string JoinFrom(const std::vector<std::string_view>& labels,
                     size_t start) {
  return StrJoin(labels.begin() + start, labels.end(), ".");
}

}  // namespace

std::string_view BuiltinPslText() { return kBuiltinPsl; }

const SuffixRuleSet& SuffixRuleSet::Builtin() {
  static const SuffixRuleSet* const kRules = [] {
    auto parsed = ParsePsl(kBuiltinPsl);
    return new SuffixRuleSet(*std::move(parsed));
  }();
  return *kRules;
}

absl::StatusOr<SuffixRuleSet> ParsePsl(std::string_view text) {
  SuffixRuleSet rules;
  size_t line_number = 0;
  for (std::string_view line : StrSplit(text, '\n')) {
    ++line_number;
    line = StripTrailingAsciiWhitespace(line);  // also drops '\r'
    line = StripLeadingAsciiWhitespace(line);
    if (line.empty() || StartsWith(line, "//")) continue;

    for (char c : line) {
      if (absl::ascii_isspace(static_cast<unsigned char>(c))) {
        return absl::InvalidArgumentError(StrCat(
            "line ", line_number, ": whitespace inside rule '", line, "'"));
      }
    }

    std::string rule = AsciiStrToLower(line);
    std::set<std::string>* target = &rules.normal_rules_;
    std::string_view body = rule;
    if (ConsumePrefix(&body, "!")) {
      target = &rules.exception_rules_;
    } else if (ConsumePrefix(&body, "*.")) {
      target = &rules.wildcard_rules_;
    }
    for (std::string_view label : StrSplit(body, '.')) {
      if (!ValidRuleLabel(label) || label == "*") {
        return absl::InvalidArgumentError(
            StrCat("line ", line_number, ": malformed rule '", line, "'"));
      }
    }
    target->insert(std::string(body));
  }
  return rules;
}

absl::StatusOr<std::string> PublicSuffix(std::string_view host,
                                         const SuffixRuleSet& rules) {
  if (host.empty()) return absl::InvalidArgumentError("empty host");
  const std::vector<std::string_view> labels = Labels(host);
  for (std::string_view label : labels) {
    if (label.empty()) {
      return absl::InvalidArgumentError(
          StrCat("empty label in host '", host, "'"));
    }
  }

  // Exception rules take priority over everything else; the suffix is the
  // exception rule minus its leftmost label.
  for (size_t i = 0; i < labels.size(); ++i) {
    if (rules.exception_rules().contains(JoinFrom(labels, i))) {
      return JoinFrom(labels, i + 1);
    }
  }
  for (size_t i = 0; i < labels.size(); ++i) {
    std::string candidate = JoinFrom(labels, i);
    if (rules.normal_rules().contains(candidate)) return candidate;
    if (i + 1 < labels.size() &&
        rules.wildcard_rules().contains(JoinFrom(labels, i + 1))) {
      return candidate;
    }
  }
  return std::string(labels.back());
}

absl::StatusOr<std::optional<std::string>> EtldPlusOne(
    std::string_view host, const SuffixRuleSet& rules) {
  if (host.empty()) return absl::InvalidArgumentError("empty host");
  if (IsIpAddress(host)) return std::optional<std::string>(std::string(host));

  absl::StatusOr<std::string> suffix = PublicSuffix(host, rules);
  if (!suffix.ok()) return suffix.status();
  if (suffix->size() == host.size()) return std::optional<std::string>();

  // host = <prefix>.<suffix>; keep the last label of <prefix>.
  std::string_view prefix = host.substr(0, host.size() - suffix->size() - 1);
  const size_t dot = prefix.rfind('.');
  std::string_view label =
      dot == std::string_view::npos ? prefix : prefix.substr(dot + 1);
  return std::optional<std::string>(StrCat(label, ".", *suffix));
}

std::string SiteForHost(std::string_view host, const SuffixRuleSet& rules) {
  absl::StatusOr<std::optional<std::string>> site = EtldPlusOne(host, rules);
  if (site.ok() && site->has_value()) return **site;
  return std::string(host);
}

}  // namespace storagelab
