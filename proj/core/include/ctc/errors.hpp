#pragma once

#include <stdexcept>

namespace ctc {

/// Raised when an exhaustive search or enumeration would exceed its
/// documented budget. Carries the limit that fired in its message.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ctc
