#pragma once

#include <stdexcept>
#include <string>

namespace activedt {

/// A configured size cap (grid cells, class members, brute-force θ) was hit.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// An algorithm reached a state its invariants rule out.
class InternalConsistencyError : public std::logic_error {
 public:
  explicit InternalConsistencyError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace activedt
