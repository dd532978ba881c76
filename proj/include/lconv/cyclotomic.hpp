#pragma once

#include <cstdint>
#include <vector>

namespace converse {

/// Integer coefficients of the L-th cyclotomic polynomial, lowest degree first.
std::vector<std::int64_t> cyclotomic_polynomial(std::uint64_t L);

/// An element of Z[zeta_L] kept in the power basis 1, zeta, ..., zeta^{phi(L)-1}.
/// Sums of roots of unity are built exactly and compared without rounding.
class CyclotomicInteger {
public:
  explicit CyclotomicInteger(std::uint64_t L);

  /// Adds `count` copies of zeta_L^t.
  void add_root(std::uint64_t t, std::int64_t count = 1);

  /// True when the element equals the rational integer n.
  bool equals_integer(std::int64_t n) const;
  bool is_zero() const { return equals_integer(0); }

private:
  std::vector<std::int64_t> reduced() const;

  std::uint64_t L_;
  // Coefficients modulo x^L - 1; reduction by Phi_L happens on comparison.
  std::vector<std::int64_t> raw_;
};

}  // namespace converse
