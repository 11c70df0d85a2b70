#include "storagelab/policy.h"
#include "strings.h"

namespace storagelab {

std::string_view PolicyName(PolicyKind policy) {
  switch (policy) {
    case PolicyKind::kPermissive:
      return "permissive";
    case PolicyKind::kBlocking:
      return "blocking";
    case PolicyKind::kSiteKeyed:
      return "site-keyed";
    case PolicyKind::kPageLength:
      return "page-length";
  }
  return "unknown";
}

std::optional<PolicyKind> ParsePolicyName(std::string_view name) {
  for (PolicyKind policy : kAllPolicies) {
    if (PolicyName(policy) == name) return policy;
  }
  return std::nullopt;
}

std::string_view PartyName(Party party) {
  return party == Party::kFirst ? "first" : "third";
}

std::string PartitionKeyToString(const PartitionKey& key) {
  struct Printer {
    std::string operator()(const partition::FirstParty& k) const {
      return StrCat("FirstParty(", k.site, ")");
    }
    std::string operator()(const partition::GlobalThirdParty& k) const {
      return StrCat("GlobalThirdParty(", k.site, ")");
    }
    std::string operator()(const partition::SiteKeyedThirdParty& k) const {
      return StrCat("SiteKeyedThirdParty(", k.first_party_site, ",",
                    k.third_party_site, ")");
    }
    std::string operator()(const partition::Ephemeral& k) const {
      return StrCat("Ephemeral(", k.load_key.value, ",", k.third_party_site,
                    ")");
    }
    std::string operator()(const partition::Blocked&) const {
      return "Blocked";
    }
  };
  return std::visit(Printer{}, key);
}

Party ClassifyParty(const Url& subject, const Url& top,
                    const SuffixRuleSet& rules) {
  return SiteForHost(subject.host, rules) == SiteForHost(top.host, rules)
             ? Party::kFirst
             : Party::kThird;
}

PartitionKey ResolvePartition(PolicyKind policy, const Url& top,
                              LoadKey load_key, const Url& subject,
                              const SuffixRuleSet& rules,
                              const PartitionOptions& options) {
  const std::string top_site = SiteForHost(top.host, rules);
  const std::string subject_site = SiteForHost(subject.host, rules);
  if (subject_site == top_site) return partition::FirstParty{top_site};

  std::string third_party =
      options.origin_keyed_third_parties ? subject.Origin() : subject_site;
  switch (policy) {
    case PolicyKind::kPermissive:
      return partition::GlobalThirdParty{std::move(third_party)};
    case PolicyKind::kBlocking:
      return partition::Blocked{};
    case PolicyKind::kSiteKeyed:
      return partition::SiteKeyedThirdParty{top_site, std::move(third_party)};
    case PolicyKind::kPageLength:
      return partition::Ephemeral{load_key, std::move(third_party)};
  }
  return partition::Blocked{};
}

std::string_view StorageApiName(StorageApi api) {
  switch (api) {
    case StorageApi::kCookie:
      return "cookie";
    case StorageApi::kLocal:
      return "local";
    case StorageApi::kSession:
      return "session";
    case StorageApi::kIndexed:
      return "indexed";
  }
  return "unknown";
}

std::optional<StorageApi> ParseStorageApi(std::string_view name) {
  for (StorageApi api : {StorageApi::kCookie, StorageApi::kLocal,
                         StorageApi::kSession, StorageApi::kIndexed}) {
    if (StorageApiName(api) == name) return api;
  }
  return std::nullopt;
}

std::string_view StorageOpName(StorageOp op) {
  switch (op) {
    case StorageOp::kGet:
      return "get";
    case StorageOp::kSet:
      return "set";
    case StorageOp::kDelete:
      return "delete";
    case StorageOp::kClear:
      return "clear";
  }
  return "unknown";
}

std::optional<StorageOp> ParseStorageOp(std::string_view name) {
  for (StorageOp op : {StorageOp::kGet, StorageOp::kSet, StorageOp::kDelete,
                       StorageOp::kClear}) {
    if (StorageOpName(op) == name) return op;
  }
  return std::nullopt;
}

StorageArea& PartitionStore::AreaFor(const PartitionKey& key) {
  return IsEphemeral(key) ? ephemeral_[key] : persistent_[key];
}

const StorageArea* PartitionStore::Find(const PartitionKey& key) const {
  const auto& areas = IsEphemeral(key) ? ephemeral_ : persistent_;
  auto it = areas.find(key);
  return it == areas.end() ? nullptr : &it->second;
}

std::optional<std::string> PartitionStore::Access(
    const PartitionKey& key, StorageOp op, StorageApi api,
    const StorageRequest& request) {
  if (IsBlocked(key)) return std::nullopt;
  // Only writes create a partition.
  if (op != StorageOp::kSet && Find(key) == nullptr) return std::nullopt;
  StorageArea& area = AreaFor(key);

  if (api == StorageApi::kCookie) {
    const Url& url = request.subject_url;
    switch (op) {
      case StorageOp::kGet:
        for (auto& [name, value] :
             area.jar.CookiesForRequest(url, request.now)) {
          if (name == request.key) return value;
        }
        return std::nullopt;
      case StorageOp::kSet:
        area.jar.SetFromHeader(StrCat(request.key, "=", request.value), url,
                               request.now);
        return std::nullopt;
      case StorageOp::kDelete:
        area.jar.Remove({request.key, url.host, DefaultPath(url.path)});
        return std::nullopt;
      case StorageOp::kClear:
        area.jar.Clear();
        return std::nullopt;
    }
    return std::nullopt;
  }

  KeyValueMap& bucket = api == StorageApi::kLocal ? area.local
                        : api == StorageApi::kIndexed
                            ? area.indexed
                            : area.session[request.session_scope];
  switch (op) {
    case StorageOp::kGet: {
      auto it = bucket.find(request.key);
      if (it == bucket.end()) return std::nullopt;
      return it->second;
    }
    case StorageOp::kSet:
      bucket.insert_or_assign(request.key, request.value);
      return std::nullopt;
    case StorageOp::kDelete:
      bucket.erase(request.key);
      return std::nullopt;
    case StorageOp::kClear:
      bucket.clear();
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<std::pair<std::string, std::string>>
PartitionStore::CookiesForRequest(const PartitionKey& key, const Url& url,
                                  Timestamp now) {
  if (IsBlocked(key) || Find(key) == nullptr) return {};
  return AreaFor(key).jar.CookiesForRequest(url, now);
}

bool PartitionStore::ApplySetCookie(const PartitionKey& key,
                                    std::string_view header, const Url& url,
                                    Timestamp now) {
  if (IsBlocked(key)) return false;
  return AreaFor(key).jar.SetFromHeader(header, url, now);
}

void PartitionStore::EndPageLoad(LoadKey load_key) {
  std::erase_if(ephemeral_, [load_key](const auto& entry) {
    const auto* ephemeral = std::get_if<partition::Ephemeral>(&entry.first);
    return ephemeral != nullptr && ephemeral->load_key == load_key;
  });
}

}  // namespace storagelab
