#include "lconv/series.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "lconv/converse.hpp"
#include "lconv/error.hpp"

namespace converse {

namespace {

using boost::multiprecision::cpp_int;

cpp_int to_cpp_int(Int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                            : static_cast<unsigned __int128>(v);
  cpp_int out = static_cast<std::uint64_t>(u >> 64U);
  out <<= 64;
  out += static_cast<std::uint64_t>(u);
  return neg ? cpp_int(-out) : out;
}

long double to_long_double(Int128 v) { return static_cast<long double>(v); }

Int128 checked_mul(Int128 a, Int128 b) {
  Int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw NumericError("eta product coefficient overflow");
  return r;
}

Int128 checked_add(Int128 a, Int128 b) {
  Int128 r;
  if (__builtin_add_overflow(a, b, &r)) throw NumericError("eta product coefficient overflow");
  return r;
}

// Sparse series: (offset, coefficient) pairs with offset >= 1; constant term 1.
using Sparse = std::vector<std::pair<std::size_t, std::int64_t>>;

// prod_n (1 - x^{m n}) via the pentagonal number theorem.
Sparse euler_function(std::uint64_t m, std::size_t len) {
  Sparse out;
  for (std::int64_t k = 1;; ++k) {
    const std::uint64_t e1 = m * static_cast<std::uint64_t>(k * (3 * k - 1) / 2);
    const std::uint64_t e2 = m * static_cast<std::uint64_t>(k * (3 * k + 1) / 2);
    if (e1 >= len) break;
    const std::int64_t sign = (k % 2 == 0) ? 1 : -1;
    out.emplace_back(e1, sign);
    if (e2 < len) out.emplace_back(e2, sign);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// prod_n (1 - x^{m n})^3 via Jacobi's identity.
Sparse euler_function_cubed(std::uint64_t m, std::size_t len) {
  Sparse out;
  for (std::int64_t k = 1;; ++k) {
    const std::uint64_t e = m * static_cast<std::uint64_t>(k * (k + 1) / 2);
    if (e >= len) break;
    out.emplace_back(e, (k % 2 == 0 ? 1 : -1) * (2 * k + 1));
  }
  return out;
}

void multiply_in_place(std::vector<Int128>& p, const Sparse& s) {
  for (std::size_t i = p.size(); i-- > 1;) {
    Int128 acc = p[i];
    for (const auto& [off, c] : s) {
      if (off > i) break;
      acc = checked_add(acc, checked_mul(c, p[i - off]));
    }
    p[i] = acc;
  }
}

void divide_in_place(std::vector<Int128>& p, const Sparse& s) {
  for (std::size_t i = 1; i < p.size(); ++i) {
    Int128 acc = p[i];
    for (const auto& [off, c] : s) {
      if (off > i) break;
      acc = checked_add(acc, checked_mul(-c, p[i - off]));
    }
    p[i] = acc;
  }
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::EtaProduct: return "eta-product";
    case Provenance::CharacterPair: return "character-pair";
    case Provenance::ExternalFile: return "external-file";
    case Provenance::Twist: return "twist";
  }
  return "unknown";
}

CoefficientSeries::CoefficientSeries(std::uint64_t level, unsigned weight, std::vector<cplx> a,
                                     Provenance prov, std::string descriptor,
                                     double growth_constant)
    : level_(level),
      weight_(weight),
      a_(std::move(a)),
      provenance_(prov),
      descriptor_(std::move(descriptor)),
      growth_(growth_constant) {
  if (level_ == 0) throw InvalidArgument("level must be positive");
  if (weight_ == 0) throw InvalidArgument("weight must be positive");
  if (a_.empty()) throw InvalidArgument("coefficient series needs at least one term");
  raw_.resize(a_.size());
  for (std::size_t n = 1; n <= a_.size(); ++n) {
    const cplxl an{a_[n - 1].real(), a_[n - 1].imag()};
    raw_[n - 1] = denormalize<long double>(an, n, weight_);
  }
}

CoefficientSeries CoefficientSeries::from_raw(std::uint64_t level, unsigned weight,
                                              const std::vector<cplxl>& raw, Provenance prov,
                                              std::string descriptor, double growth_constant) {
  std::vector<cplx> a(raw.size());
  for (std::size_t n = 1; n <= raw.size(); ++n) {
    const auto an = normalize<long double>(raw[n - 1], n, weight);
    a[n - 1] = {static_cast<double>(an.real()), static_cast<double>(an.imag())};
  }
  CoefficientSeries s(level, weight, std::move(a), prov, std::move(descriptor), growth_constant);
  s.raw_ = raw;
  return s;
}

void CoefficientSeries::set_exact(std::vector<Int128> exact) {
  if (exact.size() != a_.size()) throw InvalidArgument("exact table length mismatch");
  exact_ = std::make_shared<const std::vector<Int128>>(std::move(exact));
}

void CoefficientSeries::set_generator(std::function<cplx(std::uint64_t)> gen) {
  generator_ = std::move(gen);
}

std::optional<cplx> CoefficientSeries::coefficient(std::uint64_t n) const {
  if (n == 0) return std::nullopt;
  if (n <= a_.size()) return a_[n - 1];
  if (generator_) return generator_(n);
  return std::nullopt;
}

CoefficientSeries CoefficientSeries::perturbed(std::size_t n, cplx delta) const {
  if (n == 0 || n > a_.size()) throw InvalidArgument("perturbation index out of range");
  CoefficientSeries out = *this;
  out.a_[n - 1] += delta;
  const cplxl an{out.a_[n - 1].real(), out.a_[n - 1].imag()};
  out.raw_[n - 1] = denormalize<long double>(an, n, weight_);
  out.exact_.reset();
  out.generator_ = nullptr;
  out.descriptor_ += "+perturb(a" + std::to_string(n) + ")";
  return out;
}

CoefficientSeries CoefficientSeries::truncated(std::size_t length) const {
  if (length == 0 || length > a_.size()) throw InvalidArgument("truncation length out of range");
  CoefficientSeries out = *this;
  out.a_.resize(length);
  out.raw_.resize(length);
  if (exact_) out.exact_ = std::make_shared<const std::vector<Int128>>(exact_->begin(), exact_->begin() + static_cast<std::ptrdiff_t>(length));
  return out;
}

CoefficientSeries eta_product_coeffs(const std::vector<EtaFactor>& spec, unsigned weight,
                                     std::uint64_t level, std::size_t X) {
  if (X < 1) throw InvalidArgument("eta product: X must be >= 1");
  if (spec.empty()) throw InvalidArgument("eta product: empty spec");
  std::int64_t leading = 0;
  for (const auto& f : spec) {
    if (f.scale == 0) throw InvalidArgument("eta product: scale must be positive");
    leading += static_cast<std::int64_t>(f.scale) * f.exponent;
  }
  if (leading != 24) {
    throw InvalidArgument("eta product: leading q-exponent sum(m r)/24 = " +
                          std::to_string(leading) + "/24, expected 1");
  }
  // p[i] is the coefficient of q^i in prod (1 - q^{mn})^r, so f_{i+1} = p[i].
  std::vector<Int128> p(X, 0);
  p[0] = 1;
  for (const auto& f : spec) {
    const auto mag = static_cast<std::uint64_t>(f.exponent < 0 ? -f.exponent : f.exponent);
    const Sparse e1 = euler_function(f.scale, X);
    const Sparse e3 = euler_function_cubed(f.scale, X);
    for (std::uint64_t i = 0; i < mag / 3; ++i) {
      f.exponent > 0 ? multiply_in_place(p, e3) : divide_in_place(p, e3);
    }
    for (std::uint64_t i = 0; i < mag % 3; ++i) {
      f.exponent > 0 ? multiply_in_place(p, e1) : divide_in_place(p, e1);
    }
  }
  std::vector<cplxl> raw(X);
  for (std::size_t i = 0; i < X; ++i) raw[i] = {to_long_double(p[i]), 0.0L};

  std::string desc = "eta:";
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (i) desc += ",";
    desc += std::to_string(spec[i].scale) + "^" + std::to_string(spec[i].exponent);
  }
  desc += ":k=" + std::to_string(weight) + ":N=" + std::to_string(level);

  auto s = CoefficientSeries::from_raw(level, weight, raw, Provenance::EtaProduct, desc, 1.0);
  double growth = 1.0;
  for (std::size_t n = 1; n <= X; ++n) {
    growth = std::max(growth, std::abs(s.a(n)) / static_cast<double>(divisor_count(n)));
  }
  if (growth > 1.0) {
    s = CoefficientSeries::from_raw(level, weight, raw, Provenance::EtaProduct, desc, growth);
  }
  s.set_exact(std::move(p));
  return s;
}

CoefficientSeries eisenstein_coeffs(const DirichletCharacter& xi1, const DirichletCharacter& xi2,
                                    std::size_t X) {
  if (X < 1) throw InvalidArgument("eisenstein: X must be >= 1");
  if (!xi1.is_primitive() || !xi2.is_primitive()) {
    throw InvalidArgument("eisenstein: characters must be primitive");
  }
  if (xi1.parity() != 1 || xi2.parity() != -1) {
    throw InvalidArgument("eisenstein: need xi1 even and xi2 odd (weight 1)");
  }
  std::vector<cplx> a(X, 0.0);
  for (std::size_t d = 1; d <= X; ++d) {
    const cplx x2 = xi2(static_cast<std::int64_t>(d));
    if (x2 == 0.0) continue;
    for (std::size_t m = 1; m * d <= X; ++m) a[m * d - 1] += xi1(static_cast<std::int64_t>(m)) * x2;
  }
  const std::uint64_t level = xi1.modulus() * xi2.modulus();
  CoefficientSeries s(level, 1, std::move(a), Provenance::CharacterPair,
                      "eis:" + xi1.name() + "," + xi2.name(), 1.0);
  s.set_generator([xi1, xi2](std::uint64_t n) {
    CompensatedSum<cplx> acc;
    for (std::uint64_t d : divisors(n)) {
      acc.add(xi1(static_cast<std::int64_t>(n / d)) * xi2(static_cast<std::int64_t>(d)));
    }
    return acc.value();
  });
  return s;
}

LoadResult parse_coeffs(std::istream& in, std::uint64_t level, unsigned weight, std::size_t X) {
  std::uint64_t hdr_level = 0;
  unsigned hdr_weight = 0;
  double hdr_growth = 0;
  std::vector<cplx> a;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string tok;
      while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        try {
          if (key == "N") hdr_level = std::stoull(val);
          else if (key == "k") hdr_weight = static_cast<unsigned>(std::stoul(val));
          else if (key == "C") hdr_growth = std::stod(val);
        } catch (const std::logic_error&) {
          throw ParseError("malformed header value '" + tok + "'", row);
        }
      }
      continue;
    }
    std::istringstream ls(line);
    std::string f0, f1, f2, extra;
    if (!std::getline(ls, f0, ',') || !std::getline(ls, f1, ',') || !std::getline(ls, f2, ',') ||
        std::getline(ls, extra, ',')) {
      throw ParseError("expected three comma-separated fields n,re,im", row);
    }
    std::uint64_t n = 0;
    double re = 0, im = 0;
    try {
      std::size_t u0 = 0, u1 = 0, u2 = 0;
      n = std::stoull(f0, &u0);
      re = std::stod(f1, &u1);
      im = std::stod(f2, &u2);
      auto trailing = [](const std::string& f, std::size_t used) {
        return f.find_first_not_of(" \t", used) != std::string::npos;
      };
      if (trailing(f0, u0) || trailing(f1, u1) || trailing(f2, u2)) throw std::invalid_argument("junk");
    } catch (const std::logic_error&) {
      throw ParseError("malformed row '" + line + "'", row);
    }
    if (n != a.size() + 1) {
      throw ParseError("index gap: expected n=" + std::to_string(a.size() + 1) + ", got n=" +
                           std::to_string(n),
                       row);
    }
    if (n == 1 && std::abs(cplx(re, im) - 1.0) > 1e-12) {
      throw ParseError("a_1 must equal 1", row);
    }
    a.emplace_back(re, im);
  }
  if (a.empty()) throw ParseError("no rows");
  if (level != 0 && hdr_level != 0 && level != hdr_level) {
    throw ParseError("level " + std::to_string(level) + " disagrees with header N=" + std::to_string(hdr_level));
  }
  if (weight != 0 && hdr_weight != 0 && weight != hdr_weight) {
    throw ParseError("weight " + std::to_string(weight) + " disagrees with header k=" + std::to_string(hdr_weight));
  }
  level = level ? level : hdr_level;
  weight = weight ? weight : hdr_weight;
  if (level == 0 || weight == 0) throw ParseError("level and weight must be given or declared in the header");
  if (X != 0) {
    if (X > a.size()) {
      throw ParseError("file has " + std::to_string(a.size()) + " rows, " + std::to_string(X) + " requested");
    }
    a.resize(X);
  }
  double growth = hdr_growth;
  if (growth <= 0) {
    double observed = 0;
    for (std::size_t n = 1; n <= a.size(); ++n) {
      observed = std::max(observed, std::abs(a[n - 1]) / static_cast<double>(divisor_count(n)));
    }
    growth = 2 * observed;
  }
  CoefficientSeries s(level, weight, std::move(a), Provenance::ExternalFile, "file", growth);
  auto violations = check_multiplicativity(s);
  return {std::move(s), std::move(violations)};
}

LoadResult load_coeffs(const std::string& path, std::uint64_t level, unsigned weight, std::size_t X) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open coefficient file " + path);
  auto result = parse_coeffs(in, level, weight, X);
  return result;
}

void write_coeffs(const CoefficientSeries& s, std::ostream& out) {
  out << "# N=" << s.level() << " k=" << s.weight() << " C=" << format_g17(s.growth_constant()) << "\n";
  for (std::size_t n = 1; n <= s.length(); ++n) {
    out << n << "," << format_g17(s.a(n).real()) << "," << format_g17(s.a(n).imag()) << "\n";
  }
}

void save_coeffs(const CoefficientSeries& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write coefficient file " + path);
  write_coeffs(s, out);
}

std::vector<std::uint64_t> check_multiplicativity(const CoefficientSeries& s, double tol) {
  std::vector<std::uint64_t> bad;
  const std::size_t X = s.length();
  // Least prime factor sieve.
  std::vector<std::uint32_t> lpf(X + 1, 0);
  for (std::size_t p = 2; p <= X; ++p) {
    if (lpf[p] != 0) continue;
    for (std::size_t m = p; m <= X; m += p) {
      if (lpf[m] == 0) lpf[m] = static_cast<std::uint32_t>(p);
    }
  }
  for (std::size_t n = 2; n <= X; ++n) {
    const std::size_t p = lpf[n];
    std::size_t pe = 1, m = n;
    while (m % p == 0) {
      m /= p;
      pe *= p;
    }
    if (m == 1) continue;  // prime power
    const cplx expect = s.a(pe) * s.a(m);
    const double scale = std::max({1.0, std::abs(expect), std::abs(s.a(n))});
    if (std::abs(s.a(n) - expect) > tol * scale) bad.push_back(n);
  }
  return bad;
}

unsigned supported_degree(const CoefficientSeries& s, std::uint64_t q, unsigned cap) {
  if (s.has_generator()) return cap;
  unsigned J = 0;
  std::uint64_t pw = 1;
  while (J < cap && pw <= s.length() / q) {
    pw *= q;
    ++J;
  }
  return J;
}

EulerFactorData euler_factor_inverse(const CoefficientSeries& s, std::uint64_t q, unsigned J) {
  if (!is_prime(q)) throw InvalidArgument("euler_factor_inverse: q=" + std::to_string(q) + " is not prime");
  if (supported_degree(s, q, J) < J) {
    throw InsufficientTruncation("euler_factor_inverse: q^J = " + std::to_string(q) + "^" +
                                     std::to_string(J) + " exceeds X = " + std::to_string(s.length()),
                                 static_cast<std::size_t>(std::pow(static_cast<double>(q), J)));
  }
  if (J < 2) throw InvalidArgument("euler_factor_inverse: degree cap must be >= 2");

  std::vector<cplx> b(J + 1);
  std::uint64_t qj = 1;
  for (unsigned j = 0; j <= J; ++j) {
    b[j] = *s.coefficient(qj);
    qj *= q;
  }
  EulerFactorData out;
  out.q = q;
  out.degree_cap = J;
  out.inverse.assign(J + 1, 0.0);
  out.inverse[0] = 1.0 / b[0];
  for (unsigned j = 1; j <= J; ++j) {
    CompensatedSum<cplx> acc;
    for (unsigned i = 1; i <= j; ++i) acc.add(b[i] * out.inverse[j - i]);
    out.inverse[j] = -acc.value() / b[0];
  }
  out.lambda = b[1];
  out.mu = b[1] * b[1] - b[2];
  out.epsilon = classify_epsilon(out.lambda, out.mu);
  out.r = 1.0 - out.epsilon * std::conj(out.mu);
  for (unsigned j = 3; j <= J; ++j) out.defect = std::max(out.defect, std::abs(out.inverse[j]));
  for (unsigned j = 1; j < J; ++j) {
    out.hecke_defect = std::max(out.hecke_defect,
                                std::abs(b[j + 1] - out.lambda * b[j] + out.mu * b[j - 1]));
  }

  if (const auto* ex = s.exact_raw(); ex != nullptr && J >= 3) {
    // Raw inverse coefficients are integers when f_1 = 1.
    std::vector<cpp_int> f(J + 1), c(J + 1);
    qj = 1;
    for (unsigned j = 0; j <= J; ++j) {
      f[j] = to_cpp_int((*ex)[qj - 1]);
      qj *= q;
    }
    if (f[0] == 1) {
      c[0] = 1;
      bool zero = true;
      for (unsigned j = 1; j <= J; ++j) {
        cpp_int acc = 0;
        for (unsigned i = 1; i <= j; ++i) acc += f[i] * c[j - i];
        c[j] = -acc;
        if (j >= 3 && c[j] != 0) zero = false;
      }
      out.exact_degree_two = zero;
    }
  }

  // Roots of 1 - lambda z + mu z^2.
  const double scale = std::max({std::abs(out.lambda), std::abs(out.mu), 1.0});
  const double bound = 1.0 / std::sqrt(static_cast<double>(q));
  if (std::abs(out.mu) <= 1e-12 * scale) {
    if (std::abs(out.lambda) <= 1e-12 * scale) {
      out.min_root_modulus = std::numeric_limits<double>::infinity();
    } else {
      out.min_root_modulus = 1.0 / std::abs(out.lambda);
    }
  } else {
    const cplx disc = std::sqrt(out.lambda * out.lambda - 4.0 * out.mu);
    const cplx z1 = (out.lambda + disc) / (2.0 * out.mu);
    const cplx z2 = (out.lambda - disc) / (2.0 * out.mu);
    out.min_root_modulus = std::min(std::abs(z1), std::abs(z2));
  }
  out.roots_ok = out.min_root_modulus >= bound * (1 - 1e-9);
  return out;
}

}  // namespace converse
