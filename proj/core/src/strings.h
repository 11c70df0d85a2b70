#ifndef STORAGELAB_SRC_STRINGS_H_
#define STORAGELAB_SRC_STRINGS_H_

// The system abseil is built with its own string_view type rather than
// std::string_view. These forwarders convert at the boundary so the rest of
// the library can use std::string_view throughout.

#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace storagelab {

inline absl::string_view ToAbsl(std::string_view s) {
  return absl::string_view(s.data(), s.size());
}
inline std::string_view FromAbsl(absl::string_view s) {
  return std::string_view(s.data(), s.size());
}

namespace strings_internal {

template <typename T>
decltype(auto) Adapt(const T& value) {
  if constexpr (std::is_convertible_v<const T&, std::string_view> &&
                !std::is_same_v<T, std::string>) {
    return ToAbsl(std::string_view(value));
  } else {
    return (value);
  }
}

}  // namespace strings_internal

template <typename... Args>
std::string StrCat(const Args&... args) {
  return absl::StrCat(strings_internal::Adapt(args)...);
}

template <typename... Args>
void StrAppend(std::string* out, const Args&... args) {
  absl::StrAppend(out, strings_internal::Adapt(args)...);
}

template <typename Range>
std::string StrJoin(const Range& range, std::string_view separator) {
  return absl::StrJoin(
      range, ToAbsl(separator),
      [](std::string* out, std::string_view piece) { out->append(piece); });
}

template <typename Range, typename Formatter>
std::string StrJoin(const Range& range, std::string_view separator,
                    Formatter&& formatter) {
  return absl::StrJoin(range, ToAbsl(separator),
                       std::forward<Formatter>(formatter));
}

template <typename Iterator>
std::string StrJoin(Iterator begin, Iterator end, std::string_view separator) {
  return absl::StrJoin(
      begin, end, ToAbsl(separator),
      [](std::string* out, std::string_view piece) { out->append(piece); });
}

template <typename Predicate = absl::AllowEmpty>
std::vector<std::string_view> StrSplit(std::string_view text, char delimiter,
                                       Predicate predicate = {}) {
  std::vector<std::string_view> out;
  for (absl::string_view piece :
       absl::StrSplit(ToAbsl(text), delimiter, predicate)) {
    out.push_back(FromAbsl(piece));
  }
  return out;
}

inline std::string_view StripAsciiWhitespace(std::string_view s) {
  return FromAbsl(absl::StripAsciiWhitespace(ToAbsl(s)));
}
inline std::string_view StripLeadingAsciiWhitespace(std::string_view s) {
  return FromAbsl(absl::StripLeadingAsciiWhitespace(ToAbsl(s)));
}
inline std::string_view StripTrailingAsciiWhitespace(std::string_view s) {
  return FromAbsl(absl::StripTrailingAsciiWhitespace(ToAbsl(s)));
}

inline std::string AsciiStrToLower(std::string_view s) {
  return absl::AsciiStrToLower(ToAbsl(s));
}

inline bool StrContains(std::string_view haystack, std::string_view needle) {
  return absl::StrContains(ToAbsl(haystack), ToAbsl(needle));
}
inline bool StrContains(std::string_view haystack, char needle) {
  return absl::StrContains(ToAbsl(haystack), needle);
}
inline bool StartsWith(std::string_view text, std::string_view prefix) {
  return absl::StartsWith(ToAbsl(text), ToAbsl(prefix));
}
inline bool EndsWith(std::string_view text, std::string_view suffix) {
  return absl::EndsWith(ToAbsl(text), ToAbsl(suffix));
}

inline bool ConsumePrefix(std::string_view* text, std::string_view prefix) {
  absl::string_view view = ToAbsl(*text);
  const bool consumed = absl::ConsumePrefix(&view, ToAbsl(prefix));
  *text = FromAbsl(view);
  return consumed;
}
inline bool ConsumeSuffix(std::string_view* text, std::string_view suffix) {
  absl::string_view view = ToAbsl(*text);
  const bool consumed = absl::ConsumeSuffix(&view, ToAbsl(suffix));
  *text = FromAbsl(view);
  return consumed;
}

template <typename Int>
bool SimpleAtoi(std::string_view text, Int* out) {
  return absl::SimpleAtoi(ToAbsl(text), out);
}

}  // namespace storagelab

#endif  // STORAGELAB_SRC_STRINGS_H_
