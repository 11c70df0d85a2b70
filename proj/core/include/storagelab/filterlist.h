#ifndef STORAGELAB_FILTERLIST_H_
#define STORAGELAB_FILTERLIST_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace storagelab {

// The slice of Adblock Plus filter syntax needed to flag advertising frames:
// "||host^" domain anchors and plain substring rules with '*' wildcards.
// Element hiding, exception rules, option-suffixed and regex rules are
// skipped and counted.
struct AdRuleSet {
  std::set<std::string> domain_anchor_rules;
  std::vector<std::string> substring_rules;
  size_t skipped_rules = 0;

  size_t size() const {
    return domain_anchor_rules.size() + substring_rules.size();
  }
};

AdRuleSet ParseAdRules(std::string_view text);

// Matching is case-insensitive. Substring rules see the full URL string.
bool IsAdUrl(std::string_view url, const AdRuleSet& rules);

// True iff some substring of `text` matches `pattern`, where '*' matches any
// run of characters.
bool WildcardContains(std::string_view text, std::string_view pattern);

}  // namespace storagelab

#endif  // STORAGELAB_FILTERLIST_H_
