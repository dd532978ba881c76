#include "lconv/converse.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>

#include "lconv/error.hpp"

namespace converse {

cplx classify_epsilon(cplx lambda, cplx mu) {
  const double scale = std::max({std::abs(lambda), std::abs(mu), 1.0});
  const double zero = 1e-12 * scale;
  if (std::abs(lambda) > zero) return lambda / std::conj(lambda);
  if (std::abs(mu) > zero) return mu / std::abs(mu);
  return 1.0;
}

cplx dq_value(cplx lambda, cplx mu, cplx r, std::uint64_t q, cplx s) {
  const double qd = static_cast<double>(q);
  const cplx z = std::exp(-s * std::log(qd));
  return r + qd - 1.0 - qd * (1.0 - lambda * z + mu * z * z);
}

DqReflection verify_dq_reflection(cplx lambda, cplx mu, std::uint64_t q, double tol) {
  const double qd = static_cast<double>(q);
  const cplx eps = classify_epsilon(lambda, mu);
  const cplx r = 1.0 - eps * std::conj(mu);
  const cplx A = r - 1.0, B = qd * lambda, C = -qd * mu;
  DqReflection out;
  out.float_defect = std::max({std::abs(A - eps * std::conj(C) / qd), std::abs(B - eps * std::conj(B)),
                               std::abs(C - eps * std::conj(A) * qd)});
  const double scale = std::max({std::abs(A), std::abs(B), std::abs(C), 1.0});
  out.pass = out.float_defect <= tol * scale;
  return out;
}

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

cpp_int to_big(Int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                            : static_cast<unsigned __int128>(v);
  cpp_int out = static_cast<std::uint64_t>(u >> 64U);
  out <<= 64;
  out += static_cast<std::uint64_t>(u);
  return neg ? cpp_int(-out) : out;
}

// (re + i im) * sqrt(q)^e, kept with e in {0, 1}.
struct SqrtQNumber {
  cpp_rational re, im;
  int e = 0;
  std::uint64_t q = 2;

  SqrtQNumber normalized() const {
    SqrtQNumber out = *this;
    const int t = ((e % 2) + 2) % 2;
    const int m = (e - t) / 2;
    cpp_rational factor = 1;
    for (int i = 0; i < std::abs(m); ++i) factor *= q;
    if (m < 0) factor = 1 / factor;
    out.re *= factor;
    out.im *= factor;
    out.e = t;
    return out;
  }
  SqrtQNumber operator*(const SqrtQNumber& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re, e + o.e, q};
  }
  SqrtQNumber conj() const { return {re, -im, e, q}; }
  bool is_zero() const { return re == 0 && im == 0; }
  bool operator==(const SqrtQNumber& o) const {
    if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
    const auto a = normalized(), b = o.normalized();
    return a.e == b.e && a.re == b.re && a.im == b.im;
  }
};

}  // namespace

DqReflection verify_dq_reflection_exact(Int128 fq, Int128 fq2, std::uint64_t q, unsigned weight) {
  const int k = static_cast<int>(weight);
  const cpp_int fqb = to_big(fq);
  const cpp_int mu_raw = fqb * fqb - to_big(fq2);
  const SqrtQNumber lambda{cpp_rational(fqb), 0, -(k - 1), q};
  const SqrtQNumber mu{cpp_rational(mu_raw), 0, -2 * (k - 1), q};
  SqrtQNumber eps{1, 0, 0, q};
  if (fqb == 0 && mu_raw != 0) eps.re = mu_raw > 0 ? 1 : -1;
  const SqrtQNumber qn{cpp_rational(q), 0, 0, q};
  const SqrtQNumber inv_q{cpp_rational(1, q), 0, 0, q};
  const SqrtQNumber minus_one{-1, 0, 0, q};

  // A = r - 1 = -eps conj(mu), B = q lambda, C = -q mu.
  const SqrtQNumber A = minus_one * eps * mu.conj();
  const SqrtQNumber B = qn * lambda;
  const SqrtQNumber C = minus_one * qn * mu;

  DqReflection out;
  out.exact_available = true;
  out.exact_pass = (A == eps * C.conj() * inv_q) && (B == eps * B.conj()) && (C == eps * A.conj() * qn);
  const double sq = std::sqrt(static_cast<double>(q));
  const double lam = static_cast<double>(fq) * std::pow(sq, -(k - 1));
  const double m = static_cast<double>(mu_raw.convert_to<long double>()) * std::pow(sq, -2 * (k - 1));
  out.float_defect = verify_dq_reflection(lam, m, q).float_defect;
  out.pass = out.exact_pass;
  return out;
}

RamanujanFEResult verify_ramanujan_fe(const CoefficientSeries& f, std::uint64_t q, cplx eps1,
                                      const std::vector<cplx>& s_samples, double precision,
                                      int precision_bits) {
  if (s_samples.empty()) throw InvalidArgument("ramanujan fe: no sample points");
  const unsigned J = supported_degree(f, q, 6);
  if (J < 2) {
    throw InsufficientTruncation("ramanujan fe needs a_{q^2} at q = " + std::to_string(q), q * q);
  }
  return verify_ramanujan_fe(f, q, eps1, euler_factor_inverse(f, q, J), s_samples, precision, precision_bits);
}

RamanujanFEResult verify_ramanujan_fe(const CoefficientSeries& f, std::uint64_t q, cplx eps1,
                                      const EulerFactorData& euler, const std::vector<cplx>& s_samples,
                                      double precision, int precision_bits) {
  if (s_samples.empty()) throw InvalidArgument("ramanujan fe: no sample points");
  RamanujanFEResult out;
  out.euler = euler;
  const auto& e = out.euler;
  const CoefficientSeries b = twist_for_lfunction(f, TwistSpec::ramanujan(q, e.r));
  const CompletedLContext cb = make_context(b, q, precision, precision_bits);
  const CompletedLContext c1 = make_context(f, 1, precision, precision_bits);
  out.fe_constant = e.epsilon * eps1;
  const double Y0 = cb.default_split();
  for (const cplx s : s_samples) {
    const auto lq = lambda_completed(b, s, cb, out.fe_constant);
    const auto l1 = lambda_completed(f, s, c1, eps1);
    const cplx D = dq_value(e.lambda, e.mu, e.r, q, s);
    const double scale = std::max(lq.magnitude + std::abs(D) * l1.magnitude, 1e-300);
    out.residual_a = std::max(out.residual_a, std::abs(lq.value - D * l1.value) / scale);
    for (const double m : {2.0, 4.0}) {
      out.residual_b =
          std::max(out.residual_b, y_independence(b, s, out.fe_constant, Y0, m * Y0, cb).relative);
    }
  }
  return out;
}

cplx compute_C_chi(const DirichletCharacter& chi, cplx eps1, cplx eps_chi, std::uint64_t N,
                   cplx eps, double tol) {
  cplx C;
  if (chi.is_trivial()) {
    C = std::conj(eps);
  } else {
    const cplx ratio = gauss_sum(chi.conj()) / gauss_sum(chi);
    C = chi(-static_cast<std::int64_t>(N)) * eps1 * std::conj(eps_chi * ratio);
  }
  if (std::abs(std::abs(C) - 1) > tol) {
    throw InvalidArgument("C_chi for " + chi.name() + " is not unimodular: |C| = " +
                          format_g17(std::abs(C)));
  }
  return C;
}

SqInputData build_sq_input(std::uint64_t q, std::uint64_t N, const EulerFactorData& e,
                                     const PhaseData& phases) {
  if (!is_prime(q)) throw InvalidArgument("S_q input needs prime q");
  SqInputData d;
  d.q = q;
  d.N = N;
  d.lambda = e.lambda;
  d.mu = e.mu;
  d.eps = e.epsilon;
  d.r = e.r;
  d.root_number_defect = std::abs(std::abs(phases.eps1) - 1);
  d.eps1 = phases.eps1 / std::abs(phases.eps1);
  d.chars = characters_mod(q);
  for (const auto& chi : d.chars) {
    cplx rn{1, 0};
    if (!chi.is_trivial()) {
      const auto it = phases.eps_chi.find(chi.label());
      if (it == phases.eps_chi.end()) {
        throw InvalidArgument("missing root number for character " + chi.name());
      }
      d.root_number_defect = std::max(d.root_number_defect, std::abs(std::abs(it->second) - 1));
      rn = it->second / std::abs(it->second);
    }
    d.root_numbers.push_back(rn);
    d.C.push_back(compute_C_chi(chi, d.eps1, rn, N, d.eps));
  }
  const double phi = static_cast<double>(q - 1);
  d.C_hat.assign(q, 0.0);
  for (std::uint64_t a = 0; a < q; ++a) {
    if (gcd_u64(a, q) != 1) {
      d.C_hat[a] = std::conj(d.eps) * d.r / phi;
      continue;
    }
    CompensatedSum<cplx> acc;
    for (std::size_t i = 0; i < d.chars.size(); ++i) {
      acc.add(d.C[i] * std::conj(d.chars[i](static_cast<std::int64_t>(a))));
    }
    d.C_hat[a] = acc.value() / phi;
  }
  return d;
}

SqReport compute_S_q(SqInputData& d) {
  const std::uint64_t q = d.q;
  const auto qi = static_cast<std::int64_t>(q);
  d.S.assign(q, 0.0);
  for (std::int64_t x = 0; x < qi; ++x) {
    CompensatedSum<cplx> acc;
    for (std::int64_t a = 0; a < qi; ++a) {
      acc.add(d.C_hat[static_cast<std::size_t>(a)] * unit_root<double>((a - 1) * x, qi));
    }
    d.S[static_cast<std::size_t>(x)] = acc.value();
  }
  SqReport rep;
  for (std::int64_t x = 1; x < qi; ++x) {
    rep.coprime_defect = std::max(rep.coprime_defect, std::abs(d.S[static_cast<std::size_t>(x)] - 1.0));
  }
  const double phi = static_cast<double>(q - 1);
  rep.zero_defect = std::abs(d.S[0] - std::conj(d.eps) * (d.r / phi + 1.0));
  for (std::int64_t a = 0; a < qi; ++a) {
    CompensatedSum<cplx> acc;
    for (std::int64_t x = 0; x < qi; ++x) {
      acc.add(d.S[static_cast<std::size_t>(x)] * unit_root<double>(-(a - 1) * x, qi));
    }
    const cplx back = acc.value() / static_cast<double>(q);
    rep.reconstruction_defect =
        std::max(rep.reconstruction_defect, std::abs(back - d.C_hat[static_cast<std::size_t>(a)]));
    // C_hat(a + 1) = 1_{a = 0} + (S_q(0) - 1)/q.
    const cplx expected = (a == 0 ? 1.0 : 0.0) + (d.S[0] - 1.0) / static_cast<double>(q);
    rep.inverse_transform_defect = std::max(
        rep.inverse_transform_defect, std::abs(d.C_hat[static_cast<std::size_t>((a + 1) % qi)] - expected));
  }
  return rep;
}

std::vector<cplx> predicted_gamma_coefficients(const CoefficientSeries& f,
                                               const SqInputData& d, std::int64_t b) {
  if (d.S.size() != d.q) throw InvalidArgument("predicted coefficients need S_q; call compute_S_q");
  const std::uint64_t q = d.q;
  const auto qi = static_cast<std::int64_t>(q);
  const double phi = static_cast<double>(q - 1);
  const double qk = std::pow(static_cast<double>(q), static_cast<double>(f.weight()));
  std::vector<cplx> out(f.length());
  for (std::size_t n = 1; n <= f.length(); ++n) {
    const auto fn = f.raw_as<double>(n);
    const auto x = static_cast<std::size_t>(mod_floor(b * static_cast<std::int64_t>(n % q), qi));
    cplx v = fn * d.S[x];
    if (n % (q * q) == 0) v -= std::conj(d.r) / phi * qk * f.raw_as<double>(n / (q * q));
    out[n - 1] = v;
  }
  return out;
}

std::optional<std::uint64_t> find_nonvanishing_residue(const CoefficientSeries& f, std::uint64_t q,
                                                       std::int64_t a, std::uint64_t B) {
  if (q == 0) throw InvalidArgument("residue search: q must be positive");
  if (gcd_u64(static_cast<std::uint64_t>(mod_floor(a, static_cast<std::int64_t>(q))), q) != 1) {
    throw InvalidArgument("residue search: a must be coprime to q");
  }
  const std::uint64_t limit = std::min<std::uint64_t>(B, f.length());
  const double half = (static_cast<double>(f.weight()) - 1) / 2;
  auto n = static_cast<std::uint64_t>(mod_floor(a, static_cast<std::int64_t>(q)));
  for (; n <= limit; n += q) {
    if (n == 0) continue;
    if (std::abs(f.raw(n)) > 1e-12L * std::pow(static_cast<long double>(n), half)) return n;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> euler_inequivalence(const CoefficientSeries& s1,
                                                 const CoefficientSeries& s2, std::uint64_t B) {
  const std::size_t X = std::min(s1.length(), s2.length());
  if (B > X) {
    throw InsufficientTruncation("inequivalence search to " + std::to_string(B) +
                                     " needs both series to cover it",
                                 B);
  }
  for (std::uint64_t p : primes_up_to(B)) {
    const cplx l1 = s1.a(p), l2 = s2.a(p);
    if (std::abs(l1 - l2) > 1e-9) return p;
    if (p * p <= X) {
      const cplx m1 = l1 * l1 - s1.a(p * p), m2 = l2 * l2 - s2.a(p * p);
      if (std::abs(m1 - m2) > 1e-9) return p;
    }
  }
  return std::nullopt;
}

IntMat2 gamma_qb(std::uint64_t N, std::uint64_t q, std::int64_t b) {
  const auto qi = static_cast<std::int64_t>(q);
  const auto Ni = static_cast<std::int64_t>(N);
  if (gcd_u64(N, q) != 1) throw InvalidArgument("gamma_qb: q must be coprime to N");
  if (mod_floor(b, qi) == 0) return IntMat2::translation(-b);
  const std::uint64_t bn = static_cast<std::uint64_t>(mod_floor(mod_floor(b, qi) * (Ni % qi), qi));
  std::int64_t c1 = static_cast<std::int64_t>(inverse_mod(bn, q));
  if (2 * c1 > qi) c1 -= qi;
  const std::int64_t num = 1 - b * Ni * c1;
  if (num % qi != 0) throw NumericError("gamma_qb: determinant equation has no integer solution");
  IntMat2 g{qi, -b, Ni * c1, num / qi};
  if (g.det() != 1) throw NumericError("gamma_qb: constructed matrix has det != 1");
  return g;
}

GammaInvarianceResult verify_gamma_invariance(const CoefficientSeries& f, std::uint64_t q,
                                              std::int64_t b, double precision) {
  if (!is_prime(q)) throw InvalidArgument("gamma invariance: q must be prime");
  const std::uint64_t N = f.level();
  if (q % N != 1 % N) {
    throw InvalidArgument("gamma invariance: q = " + std::to_string(q) + " is not 1 mod N = " +
                          std::to_string(N));
  }
  GammaInvarianceResult out;
  out.gamma = gamma_qb(N, q, b);
  const auto points = balanced_points(out.gamma);
  out.residual = check_modularity(f, Mat2(out.gamma), 1.0, points, false, false, precision);
  return out;
}

LocalConsistency local_consistency(const EulerFactorData& e) {
  LocalConsistency t;
  t.r_abs = std::abs(e.r);
  t.mu_unimodularity = std::abs(std::abs(e.mu) - 1);
  const double la = std::abs(e.lambda);
  t.lambda_real_nonzero = la > 1e-12 && std::abs(e.lambda.imag()) <= 1e-12 * std::max(la, 1.0);
  if (t.lambda_real_nonzero) t.eps_defect = std::abs(e.epsilon - 1.0);
  return t;
}

}  // namespace converse
