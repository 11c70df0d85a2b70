#ifndef STORAGELAB_STATUS_MACROS_H_
#define STORAGELAB_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"

#define STORAGELAB_CONCAT_INNER(a, b) a##b
#define STORAGELAB_CONCAT(a, b) STORAGELAB_CONCAT_INNER(a, b)

#define STORAGELAB_ASSIGN_OR_RETURN_IMPL(var, lhs, expr) \
  auto var = (expr);                                     \
  if (!var.ok()) return var.status();                    \
  lhs = *std::move(var)

// lhs = value of `expr` (an absl::StatusOr), or return its status.
#define ASSIGN_OR_RETURN(lhs, expr)                                         \
  STORAGELAB_ASSIGN_OR_RETURN_IMPL(STORAGELAB_CONCAT(status_or_, __LINE__), \
                                   lhs, expr)

#define RETURN_IF_ERROR(expr)                           \
  do {                                                  \
    if (absl::Status status_ = (expr); !status_.ok()) { \
      return status_;                                   \
    }                                                   \
  } while (false)

#endif  // STORAGELAB_STATUS_MACROS_H_
