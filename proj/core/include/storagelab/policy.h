#ifndef STORAGELAB_POLICY_H_
#define STORAGELAB_POLICY_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "storagelab/cookie.h"
#include "storagelab/psl.h"
#include "storagelab/url.h"

namespace storagelab {

enum class PolicyKind { kPermissive, kBlocking, kSiteKeyed, kPageLength };

inline constexpr PolicyKind kAllPolicies[] = {
    PolicyKind::kPermissive, PolicyKind::kBlocking, PolicyKind::kSiteKeyed,
    PolicyKind::kPageLength};

// "permissive", "blocking", "site-keyed", "page-length".
std::string_view PolicyName(PolicyKind policy);
std::optional<PolicyKind> ParsePolicyName(std::string_view name);

enum class Party { kFirst, kThird };
std::string_view PartyName(Party party);

// Identifies one committed top-level page load. Minted from a per-run
// counter, so unique within a simulation including reloads of the same URL.
struct LoadKey {
  uint64_t value = 0;
  friend auto operator<=>(const LoadKey&, const LoadKey&) = default;
};

class LoadKeyMinter {
 public:
  LoadKey Next() { return LoadKey{++last_}; }

 private:
  uint64_t last_ = 0;
};

namespace partition {

struct FirstParty {
  std::string site;
  friend auto operator<=>(const FirstParty&, const FirstParty&) = default;
};
struct GlobalThirdParty {
  std::string site;
  friend auto operator<=>(const GlobalThirdParty&,
                          const GlobalThirdParty&) = default;
};
struct SiteKeyedThirdParty {
  std::string first_party_site;
  std::string third_party_site;
  friend auto operator<=>(const SiteKeyedThirdParty&,
                          const SiteKeyedThirdParty&) = default;
};
struct Ephemeral {
  LoadKey load_key;
  std::string third_party_site;
  friend auto operator<=>(const Ephemeral&, const Ephemeral&) = default;
};
struct Blocked {
  friend auto operator<=>(const Blocked&, const Blocked&) = default;
};

}  // namespace partition

// The identity a storage area lives under. The alternative encodes the
// isolation scheme of the policy that produced it.
using PartitionKey =
    std::variant<partition::FirstParty, partition::GlobalThirdParty,
                 partition::SiteKeyedThirdParty, partition::Ephemeral,
                 partition::Blocked>;

std::string PartitionKeyToString(const PartitionKey& key);

inline bool IsBlocked(const PartitionKey& key) {
  return std::holds_alternative<partition::Blocked>(key);
}
inline bool IsEphemeral(const PartitionKey& key) {
  return std::holds_alternative<partition::Ephemeral>(key);
}

struct PartitionOptions {
  // Key third-party partitions by origin instead of eTLD+1.
  bool origin_keyed_third_parties = false;
};

// First iff both hosts have the same site. Only the top-level URL matters;
// intermediate frames never participate.
Party ClassifyParty(const Url& subject, const Url& top,
                    const SuffixRuleSet& rules);

// `subject` is the frame URL for script storage and the destination URL for
// HTTP cookies. First-party subjects map to FirstParty under every policy.
PartitionKey ResolvePartition(PolicyKind policy, const Url& top,
                              LoadKey load_key, const Url& subject,
                              const SuffixRuleSet& rules,
                              const PartitionOptions& options = {});

enum class StorageApi { kCookie, kLocal, kSession, kIndexed };
enum class StorageOp { kGet, kSet, kDelete, kClear };

std::string_view StorageApiName(StorageApi api);
std::optional<StorageApi> ParseStorageApi(std::string_view name);
std::string_view StorageOpName(StorageOp op);
std::optional<StorageOp> ParseStorageOp(std::string_view name);

// sessionStorage is additionally scoped to one (tab, load).
struct SessionScope {
  std::string tab;
  LoadKey load_key;
  friend auto operator<=>(const SessionScope&, const SessionScope&) = default;
};

using KeyValueMap = std::map<std::string, std::string>;

struct StorageArea {
  CookieJar jar;
  KeyValueMap local;
  KeyValueMap indexed;
  std::map<SessionScope, KeyValueMap> session;

  bool empty() const {
    return jar.empty() && local.empty() && indexed.empty() && session.empty();
  }
};

// Everything a storage operation needs besides the key/op/api triple. The
// cookie API uses `subject_url` and `now` like document.cookie would.
struct StorageRequest {
  std::string key;
  std::string value;
  Url subject_url;
  Timestamp now = 0;
  SessionScope session_scope;
};

// Storage engine keyed by PartitionKey. Ephemeral keys live in their own map
// and are destroyed by EndPageLoad; the Blocked key never owns storage.
class PartitionStore {
 public:
  // get returns the stored value or nullopt; set/delete/clear return
  // nullopt. Under a Blocked key every operation is a silent no-op.
  std::optional<std::string> Access(const PartitionKey& key, StorageOp op,
                                    StorageApi api,
                                    const StorageRequest& request);

  // HTTP side: cookies attached to a request and Set-Cookie application.
  // Both are no-ops for a Blocked key.
  std::vector<std::pair<std::string, std::string>> CookiesForRequest(
      const PartitionKey& key, const Url& url, Timestamp now);
  bool ApplySetCookie(const PartitionKey& key, std::string_view header,
                      const Url& url, Timestamp now);

  // Destroys every Ephemeral(load_key, *) area. Unknown keys are ignored.
  void EndPageLoad(LoadKey load_key);

  const StorageArea* Find(const PartitionKey& key) const;

  const std::map<PartitionKey, StorageArea>& persistent() const {
    return persistent_;
  }
  const std::map<PartitionKey, StorageArea>& ephemeral() const {
    return ephemeral_;
  }

 private:
  StorageArea& AreaFor(const PartitionKey& key);

  std::map<PartitionKey, StorageArea> persistent_;
  std::map<PartitionKey, StorageArea> ephemeral_;
};

}  // namespace storagelab

#endif  // STORAGELAB_POLICY_H_
