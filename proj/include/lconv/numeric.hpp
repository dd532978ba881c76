#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace converse {

using cplx = std::complex<double>;

// Elementary integer arithmetic --------------------------------------------

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::int64_t mod_floor(std::int64_t a, std::int64_t m);
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);

/// Prime factorization by trial division, as (prime, exponent) pairs in
/// increasing prime order.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);
std::vector<std::uint64_t> divisors(std::uint64_t n);
std::uint64_t divisor_count(std::uint64_t n);
std::uint64_t euler_phi(std::uint64_t n);

/// Extended Euclid: returns g and (x, y) with a*x + b*y = g.
struct ExtGcd {
  std::int64_t g, x, y;
};
ExtGcd ext_gcd(std::int64_t a, std::int64_t b);

/// Modular inverse of a mod m, or 0 if it does not exist.
std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m);

/// Integer power with no overflow check; callers keep results small.
std::uint64_t ipow(std::uint64_t base, unsigned exp);

// Roots of unity ------------------------------------------------------------

/// e(num/den) = exp(2 pi i num/den). The fraction is reduced to (-1/2, 1/2]
/// before the trigonometric call so the phase is accurate for any integer input.
template <class Real = double>
std::complex<Real> unit_root(std::int64_t num, std::int64_t den) {
  std::int64_t r = mod_floor(num, den);
  if (2 * r > den) r -= den;
  if (r == 0) return {1, 0};
  if (2 * r == den) return {-1, 0};
  if (4 * r == den) return {0, 1};
  if (4 * r == -den) return {0, -1};
  const Real angle = 2 * std::numbers::pi_v<Real> * static_cast<Real>(r) / static_cast<Real>(den);
  return {std::cos(angle), std::sin(angle)};
}

// Summation -----------------------------------------------------------------

/// Neumaier-compensated accumulator for real or complex terms.
template <class Real>
class CompensatedSum {
public:
  void add(Real x) {
    const Real t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    abs_ += std::abs(x);
  }
  Real value() const { return sum_ + comp_; }
  /// Sum of |terms|; used for roundoff estimates.
  Real magnitude() const { return abs_; }

private:
  Real sum_{0};
  Real comp_{0};
  Real abs_{0};
};

template <class Real>
class CompensatedSum<std::complex<Real>> {
public:
  void add(const std::complex<Real>& z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<Real> value() const { return {re_.value(), im_.value()}; }
  Real magnitude() const { return re_.magnitude() + im_.magnitude(); }

private:
  CompensatedSum<Real> re_;
  CompensatedSum<Real> im_;
};

/// Decimal string with 17 significant digits (round-trips a double).
std::string format_g17(double x);

}  // namespace converse
