#ifndef STORAGELAB_PSL_H_
#define STORAGELAB_PSL_H_

#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace storagelab {

// Rules from a public_suffix_list.dat document. Each rule is stored as its
// dotted label sequence with the '!' / '*.' markers stripped, so "*.ck" lives
// in wildcard_rules as "ck" and "!www.ck" in exception_rules as "www.ck".
//
// Immutable after parsing; safe to share between threads.
class SuffixRuleSet {
 public:
  SuffixRuleSet() = default;

  const std::set<std::string>& normal_rules() const { return normal_rules_; }
  const std::set<std::string>& wildcard_rules() const {
    return wildcard_rules_;
  }
  const std::set<std::string>& exception_rules() const {
    return exception_rules_;
  }

  bool empty() const {
    return normal_rules_.empty() && wildcard_rules_.empty() &&
           exception_rules_.empty();
  }
  size_t size() const {
    return normal_rules_.size() + wildcard_rules_.size() +
           exception_rules_.size();
  }

  // A small rule set covering common TLDs and the rules exercised by the
  // publicsuffix.org conformance vectors. Used by tests and as the CLI
  // default when no --psl file is given.
  static const SuffixRuleSet& Builtin();

 private:
  friend absl::StatusOr<SuffixRuleSet> ParsePsl(std::string_view text);

  std::set<std::string> normal_rules_;
  std::set<std::string> wildcard_rules_;
  std::set<std::string> exception_rules_;
};

// Parses the PSL file format: one rule per line, "//" comment lines, blank
// lines, optional "!" and "*." prefixes. Only the first whitespace-delimited
// token of a line is significant in the upstream format; here a line whose
// rule token is followed by further non-space text is rejected, with the
// 1-based line number in the error message.
absl::StatusOr<SuffixRuleSet> ParsePsl(std::string_view text);

// The text of the builtin rule set, in PSL format.
std::string_view BuiltinPslText();

// Longest matching public suffix of `host` (lowercase, no trailing dot).
// Exception rules beat wildcards; a host matching no rule has its last label
// as public suffix.
absl::StatusOr<std::string> PublicSuffix(std::string_view host,
                                         const SuffixRuleSet& rules);

// The registrable domain ("site"): the public suffix plus one more label, or
// nullopt when `host` is itself a public suffix. IP literals are their own
// site.
absl::StatusOr<std::optional<std::string>> EtldPlusOne(
    std::string_view host, const SuffixRuleSet& rules);

// eTLD+1 of `host`, falling back to `host` itself when there is no
// registrable domain or the host is malformed. Party classification and
// partition keying always go through this.
std::string SiteForHost(std::string_view host, const SuffixRuleSet& rules);

}  // namespace storagelab

#endif  // STORAGELAB_PSL_H_
