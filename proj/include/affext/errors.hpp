#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace affext {

/// Raised when an enumeration would exceed its configured budget. Work is
/// never silently truncated or sampled instead.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t required, std::uint64_t budget)
      : std::runtime_error(what + ": requires " + std::to_string(required) +
                           " exceeding budget " + std::to_string(budget)),
        required_(required),
        budget_(budget) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

/// Budgets shared by the enumeration-heavy operations.
struct Budget {
  std::uint64_t points = 100'000'000;     // q^k per subspace, q^v per polynomial
  std::uint64_t subspaces = 100'000'000;  // affine subspaces per sweep
  std::uint64_t minor_ops = 100'000'000;  // C(n,m)*m^3 for MDS verification
};

// Saturating integer power; returns UINT64_MAX on overflow.
inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (base != 0 && r > UINT64_MAX / base) return UINT64_MAX;
    r *= base;
  }
  return r;
}

inline void require_budget(const char* what, std::uint64_t required, std::uint64_t budget) {
  if (required > budget) throw BudgetExceeded(what, required, budget);
}

}  // namespace affext
