#include "lconv/cyclotomic.hpp"

#include <map>

#include "lconv/error.hpp"
#include "lconv/numeric.hpp"

namespace converse {

namespace {

// Quotient of num by a monic divisor; the division must be exact.
std::vector<std::int64_t> exact_divide(std::vector<std::int64_t> num,
                                       const std::vector<std::int64_t>& den) {
  const std::size_t dn = den.size() - 1;
  if (num.size() < den.size()) throw NumericError("cyclotomic division underflow");
  std::vector<std::int64_t> quot(num.size() - dn, 0);
  for (std::size_t i = num.size(); i-- > dn;) {
    const std::int64_t c = num[i];
    quot[i - dn] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
  }
  for (std::size_t i = 0; i < dn; ++i) {
    if (num[i] != 0) throw NumericError("cyclotomic division not exact");
  }
  return quot;
}

std::vector<std::int64_t> multiply(const std::vector<std::int64_t>& a,
                                   const std::vector<std::int64_t>& b) {
  std::vector<std::int64_t> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

}  // namespace

std::vector<std::int64_t> cyclotomic_polynomial(std::uint64_t L) {
  if (L == 0) throw InvalidArgument("cyclotomic order must be positive");
  static thread_local std::map<std::uint64_t, std::vector<std::int64_t>> cache;
  if (auto it = cache.find(L); it != cache.end()) return it->second;

  std::vector<std::int64_t> xn1(L + 1, 0);
  xn1[0] = -1;
  xn1[L] = 1;
  std::vector<std::int64_t> den{1};
  for (std::uint64_t d : divisors(L)) {
    if (d == L) continue;
    den = multiply(den, cyclotomic_polynomial(d));
  }
  auto phi = exact_divide(std::move(xn1), den);
  cache.emplace(L, phi);
  return phi;
}

CyclotomicInteger::CyclotomicInteger(std::uint64_t L) : L_(L), raw_(L, 0) {
  if (L == 0) throw InvalidArgument("cyclotomic order must be positive");
}

void CyclotomicInteger::add_root(std::uint64_t t, std::int64_t count) {
  raw_[t % L_] += count;
}

std::vector<std::int64_t> CyclotomicInteger::reduced() const {
  const auto phi = cyclotomic_polynomial(L_);
  const std::size_t deg = phi.size() - 1;
  std::vector<std::int64_t> r = raw_;
  for (std::size_t i = r.size(); i-- > deg;) {
    const std::int64_t c = r[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j) r[i - deg + j] -= c * phi[j];
  }
  r.resize(deg);
  return r;
}

bool CyclotomicInteger::equals_integer(std::int64_t n) const {
  auto r = reduced();
  if (r.empty()) return n == 0;
  r[0] -= n;
  for (auto c : r) {
    if (c != 0) return false;
  }
  return true;
}

}  // namespace converse
