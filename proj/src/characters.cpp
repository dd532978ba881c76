#include "lconv/characters.hpp"

#include <map>
#include <mutex>
#include <numeric>

#include "lconv/cyclotomic.hpp"
#include "lconv/error.hpp"

namespace converse {

namespace {

std::uint64_t multiplicative_order(std::uint64_t g, std::uint64_t m) {
  std::uint64_t x = g % m, k = 1;
  while (x != 1) {
    x = mul_mod(x, g, m);
    ++k;
  }
  return k;
}

// Least primitive root mod p^2; it is then a primitive root mod every p^e.
std::uint64_t conrey_generator(std::uint64_t p) {
  const std::uint64_t p2 = p * p;
  const std::uint64_t target = p * (p - 1);
  for (std::uint64_t g = 2;; ++g) {
    if (g % p == 0) continue;
    if (multiplicative_order(g, p2) == target) return g;
  }
}

// Phase contributed by one prime-power component, as num/den.
struct Phase {
  std::uint64_t num;
  std::uint64_t den;
};

// Discrete logarithms for one prime-power factor of the modulus.
class LocalLogs {
public:
  LocalLogs(std::uint64_t p, unsigned e) : p_(p), e_(e), pe_(ipow(p, e)) {
    if (p == 2) {
      // n = sign * 5^a mod 2^e.
      sign_.assign(pe_, 0);
      log_.assign(pe_, 0);
      if (e >= 2) {
        const std::uint64_t period = e >= 3 ? (pe_ >> 2U) : 1;
        std::uint64_t x = 1;
        for (std::uint64_t a = 0; a < period; ++a) {
          log_[x] = a;
          sign_[x] = 1;
          log_[pe_ - x] = a;
          sign_[pe_ - x] = -1;
          x = x * 5 % pe_;
        }
      }
    } else {
      const std::uint64_t g = conrey_generator(p);
      const std::uint64_t phi = pe_ / p * (p - 1);
      log_.assign(pe_, 0);
      std::uint64_t x = 1;
      for (std::uint64_t a = 0; a < phi; ++a) {
        log_[x] = a;
        x = mul_mod(x, g, pe_);
      }
    }
  }

  std::uint64_t prime_power() const { return pe_; }

  // Phase of chi_{p^e}(m, n) for units m, n.
  Phase pairing(std::uint64_t m, std::uint64_t n) const {
    m %= pe_;
    n %= pe_;
    if (p_ == 2) {
      if (e_ == 1) return {0, 1};
      const std::uint64_t period = e_ >= 3 ? (pe_ >> 2U) : 1;
      // e((1 - s_m)(1 - s_n)/8 + a_m a_n / 2^{e-2}) over common denominator 2*period.
      const std::uint64_t den = 2 * period;
      std::uint64_t num = (sign_[m] < 0 && sign_[n] < 0) ? period : 0;
      num += 2 * (log_[m] * log_[n] % period);
      return {num % den, den};
    }
    const std::uint64_t phi = pe_ / p_ * (p_ - 1);
    return {static_cast<std::uint64_t>(static_cast<unsigned __int128>(log_[m]) * log_[n] % phi), phi};
  }

private:
  std::uint64_t p_;
  unsigned e_;
  std::uint64_t pe_;
  std::vector<std::uint64_t> log_;
  std::vector<int> sign_;
};

}  // namespace

DirichletCharacter::DirichletCharacter(std::uint64_t modulus, std::uint64_t label)
    : modulus_(modulus), label_(modulus == 1 ? 1 : label % modulus) {
  if (modulus == 0) throw InvalidArgument("character modulus must be positive");
  if (gcd_u64(label_, modulus) != 1) {
    throw InvalidArgument("Conrey label " + std::to_string(label) + " is not a unit mod " +
                          std::to_string(modulus));
  }
  const auto q = modulus;
  std::vector<LocalLogs> locals;
  std::uint64_t den = 1;
  for (auto [p, e] : factorize(q)) {
    locals.emplace_back(p, e);
    const std::uint64_t pe = ipow(p, e);
    const std::uint64_t local_den =
        p == 2 ? (e >= 3 ? 2 * (pe >> 2U) : 2) : pe / p * (p - 1);
    den = std::lcm(den, local_den);
  }

  std::vector<std::int64_t> raw(q, -1);
  std::uint64_t g = den;
  for (std::uint64_t n = 0; n < q; ++n) {
    if (gcd_u64(n, q) != 1) continue;
    std::uint64_t t = 0;
    for (const auto& loc : locals) {
      const Phase ph = loc.pairing(label_, n);
      t = (t + ph.num * (den / ph.den)) % den;
    }
    raw[n] = static_cast<std::int64_t>(t);
    g = std::gcd(g, t);
  }
  if (q == 1) raw[0] = 0;
  // Reduce to the exact order of the character.
  order_ = den / std::gcd(g, den);
  const std::uint64_t scale = den / order_;
  table_.resize(q);
  for (std::uint64_t n = 0; n < q; ++n) {
    table_[n] = raw[n] < 0 ? -1 : raw[n] / static_cast<std::int64_t>(scale);
  }

  const auto tm1 = exponent(-1);
  parity_ = (tm1 && *tm1 != 0) ? -1 : 1;

  // Conductor: least divisor d of q such that chi is trivial on units = 1 mod d.
  conductor_ = q;
  for (std::uint64_t d : divisors(q)) {
    bool induced = true;
    for (std::uint64_t n = 1; n < q && induced; n += d) {
      if (table_[n] > 0) induced = false;
    }
    if (induced) {
      conductor_ = d;
      break;
    }
  }
}

std::optional<std::uint64_t> DirichletCharacter::exponent(std::int64_t n) const {
  const auto v = table_[static_cast<std::size_t>(mod_floor(n, static_cast<std::int64_t>(modulus_)))];
  if (v < 0) return std::nullopt;
  return static_cast<std::uint64_t>(v);
}

std::optional<std::uint64_t> DirichletCharacter::exponent_over(std::int64_t n,
                                                               std::uint64_t den) const {
  if (den % order_ != 0) throw InvalidArgument("denominator must be a multiple of the order");
  const auto t = exponent(n);
  if (!t) return std::nullopt;
  return *t * (den / order_);
}

DirichletCharacter DirichletCharacter::conj() const {
  DirichletCharacter out = *this;
  out.label_ = modulus_ == 1 ? 1 : inverse_mod(label_, modulus_);
  const auto ord = static_cast<std::int64_t>(order_);
  for (auto& t : out.table_) {
    if (t > 0) t = ord - t;
  }
  return out;
}

std::string DirichletCharacter::name() const {
  return std::to_string(modulus_) + "." + std::to_string(label_);
}

std::vector<DirichletCharacter> characters_mod(std::uint64_t q) {
  if (q == 0) throw InvalidArgument("characters_mod: modulus must be >= 1");
  static std::mutex mu;
  static std::map<std::uint64_t, std::vector<DirichletCharacter>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    const auto it = cache.find(q);
    if (it != cache.end()) return it->second;
  }
  std::vector<DirichletCharacter> out;
  if (q == 1) {
    out.emplace_back(1, 1);
  } else {
    for (std::uint64_t m = 1; m < q; ++m) {
      if (gcd_u64(m, q) == 1) out.emplace_back(q, m);
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(q, std::move(out)).first->second;
}

DirichletCharacter parse_character(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos) throw ParseError("character label must look like q.m: " + text);
  try {
    std::size_t used1 = 0, used2 = 0;
    const auto q = std::stoull(text.substr(0, dot), &used1);
    const auto m = std::stoull(text.substr(dot + 1), &used2);
    if (used1 != dot || used2 != text.size() - dot - 1) throw std::invalid_argument("junk");
    return DirichletCharacter(q, m);
  } catch (const std::logic_error&) {
    throw ParseError("character label must look like q.m: " + text);
  }
}

std::int64_t ramanujan_sum(std::uint64_t q, std::int64_t n) {
  if (q == 0) throw InvalidArgument("ramanujan_sum: q must be >= 1");
  CompensatedSum<double> acc;
  const auto qi = static_cast<std::int64_t>(q);
  const std::int64_t nr = mod_floor(n, qi);
  for (std::int64_t a = 1; a <= qi; ++a) {
    if (gcd_u64(static_cast<std::uint64_t>(a), q) != 1) continue;
    acc.add(unit_root<double>(a * nr, qi).real());
  }
  // The sum is a rational integer; rounding recovers it exactly for q < 2^40.
  return static_cast<std::int64_t>(std::llround(acc.value()));
}

double verify_additive_fourier_identity(std::uint64_t q, std::int64_t n) {
  if (!is_prime(q)) throw InvalidArgument("additive Fourier identity needs prime q");
  const auto qi = static_cast<std::int64_t>(q);
  const auto lhs = unit_root<double>(n, qi);
  const double qd = static_cast<double>(q);
  CompensatedSum<cplx> rhs;
  rhs.add(1.0);
  const auto chars = characters_mod(q);
  const double chi0 = (mod_floor(n, qi) == 0) ? 0.0 : 1.0;
  rhs.add(-qd / (qd - 1) * chi0);
  for (const auto& chi : chars) {
    if (chi.is_trivial()) continue;
    rhs.add(gauss_sum(chi.conj()) * chi(n) / (qd - 1));
  }
  return std::abs(lhs - rhs.value());
}

bool column_orthogonality_exact(const std::vector<DirichletCharacter>& chars, std::int64_t a,
                                std::int64_t b) {
  if (chars.empty()) throw InvalidArgument("empty character list");
  const auto q = chars.front().modulus();
  std::uint64_t L = 1;
  for (const auto& chi : chars) L = std::lcm(L, chi.order());
  CyclotomicInteger sum(L);
  for (const auto& chi : chars) {
    const auto ta = chi.exponent_over(a, L);
    const auto tb = chi.exponent_over(b, L);
    if (!ta || !tb) throw InvalidArgument("orthogonality arguments must be units");
    sum.add_root((*ta + L - *tb) % L);
  }
  const auto qi = static_cast<std::int64_t>(q);
  const bool same = mod_floor(a - b, qi) == 0;
  return sum.equals_integer(same ? static_cast<std::int64_t>(chars.size()) : 0);
}

bool row_orthogonality_exact(const DirichletCharacter& chi1, const DirichletCharacter& chi2) {
  if (chi1.modulus() != chi2.modulus()) throw InvalidArgument("moduli differ");
  const auto q = chi1.modulus();
  const std::uint64_t L = std::lcm(chi1.order(), chi2.order());
  CyclotomicInteger sum(L);
  for (std::uint64_t n = 0; n < q; ++n) {
    const auto t1 = chi1.exponent_over(static_cast<std::int64_t>(n), L);
    if (!t1) continue;
    const auto t2 = chi2.exponent_over(static_cast<std::int64_t>(n), L);
    sum.add_root((*t1 + L - *t2) % L);
  }
  return sum.equals_integer(chi1 == chi2 ? static_cast<std::int64_t>(euler_phi(q)) : 0);
}

}  // namespace converse
