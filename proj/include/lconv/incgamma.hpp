#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "lconv/error.hpp"

namespace converse {

namespace detail {

// (e^z - 1)/z without cancellation near 0.
template <class Real>
std::complex<Real> expm1_over(std::complex<Real> z) {
  if (std::abs(z) > Real(0.5)) return (std::exp(z) - Real(1)) / z;
  std::complex<Real> term{1}, sum{1};
  for (int n = 2; n < 40; ++n) {
    term *= z / Real(n);
    sum += term;
    if (std::abs(term) < std::numeric_limits<Real>::epsilon() * std::abs(sum)) break;
  }
  return sum;
}

template <class Real>
Real zeta_int(int k) {
  static constexpr std::array<long double, 11> small = {
      0.0L, 0.0L, 1.6449340668482264365L, 1.2020569031595942854L, 1.0823232337111381915L,
      1.0369277551433699263L, 1.0173430619844491397L, 1.0083492773819228268L,
      1.0040773561979443394L, 1.0020083928260822144L, 1.0009945751278180853L};
  if (k <= 10) return static_cast<Real>(small[static_cast<std::size_t>(k)]);
  Real s = 0;
  for (int n = 60; n >= 1; --n) s += std::pow(Real(n), Real(-k));
  return s;
}

// (Gamma(1 + s) - 1)/s for |s| small, from the Taylor series of log Gamma(1 + s).
template <class Real>
std::complex<Real> gamma1p_minus_one_over(std::complex<Real> s) {
  constexpr Real euler_gamma = static_cast<Real>(0.57721566490153286060651209008240243L);
  std::complex<Real> u_over_s{-euler_gamma}, pw{1};
  for (int k = 2; k < 40; ++k) {
    pw *= s;
    const auto term = pw * (zeta_int<Real>(k) / Real(k)) * Real(k % 2 == 0 ? 1 : -1);
    u_over_s += term;
    if (std::abs(term) < std::numeric_limits<Real>::epsilon() * std::abs(u_over_s)) break;
  }
  return expm1_over(u_over_s * s) * u_over_s;
}

}  // namespace detail

/// log Gamma(z) for complex z away from the poles. The branch of the imaginary
/// part is not the principal one; only exp(log_gamma) is meaningful.
template <class Real>
std::complex<Real> log_gamma(std::complex<Real> z) {
  using C = std::complex<Real>;
  constexpr Real pi = std::numbers::pi_v<Real>;
  if (z.real() < Real(0.5)) {
    return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(C(1) - z);
  }
  C shift{0};
  C w = z;
  C prod{1};
  int count = 0;
  while (w.real() < Real(20)) {
    prod *= w;
    w += Real(1);
    if (++count == 16) {
      shift += std::log(prod);
      prod = 1;
      count = 0;
    }
  }
  shift += std::log(prod);
  static constexpr std::array<long double, 10> b2k = {
      1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30, 5.0L / 66,
      -691.0L / 2730, 7.0L / 6, -3617.0L / 510, 43867.0L / 798, -174611.0L / 330};
  const C inv = Real(1) / w;
  const C inv2 = inv * inv;
  C corr{0};
  C pw = inv;
  for (std::size_t k = 1; k <= b2k.size(); ++k) {
    corr += static_cast<Real>(b2k[k - 1]) / Real(2 * k * (2 * k - 1)) * pw;
    pw *= inv2;
  }
  const C lg = (w - Real(0.5)) * std::log(w) - w + Real(0.5) * std::log(2 * pi) + corr;
  return lg - shift;
}

template <class Real>
std::complex<Real> gamma_fn(std::complex<Real> z) {
  return std::exp(log_gamma(z));
}

/// Operating range of upper_incomplete_gamma.
struct IncGammaRange {
  static constexpr double re_min = -30, re_max = 40, im_abs_max = 40;
  static constexpr double x_min = 1e-4, x_max = 300;
};

namespace detail {

template <class Real>
std::complex<Real> incgamma_cf(std::complex<Real> s, Real x) {
  using C = std::complex<Real>;
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real tiny = std::numeric_limits<Real>::min() / eps;
  C f = C(x + 1) - s;
  if (std::abs(f) < tiny) f = tiny;
  C c = f, d = 0;
  for (int n = 1; n < 20000; ++n) {
    const C an = -Real(n) * (C(Real(n)) - s);
    const C bn = C(x + Real(2 * n + 1)) - s;
    d = bn + an * d;
    if (std::abs(d) < tiny) d = tiny;
    c = bn + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = Real(1) / d;
    const C delta = c * d;
    f *= delta;
    if (std::abs(delta - Real(1)) < eps) {
      return std::exp(s * std::log(x) - x) / f;
    }
  }
  throw NumericError("incomplete gamma continued fraction did not converge");
}

// Gamma(s) - gamma(s, x) from the power series of the lower function.
template <class Real>
std::complex<Real> incgamma_series(std::complex<Real> s, Real x) {
  using C = std::complex<Real>;
  const Real eps = std::numeric_limits<Real>::epsilon();
  C term = Real(1) / s, sum = term;
  for (int n = 1; n < 20000; ++n) {
    term *= x / (s + Real(n));
    sum += term;
    if (std::abs(term) < eps * std::abs(sum)) {
      return gamma_fn(s) - std::exp(s * std::log(x) - x) * sum;
    }
  }
  throw NumericError("incomplete gamma series did not converge");
}

// Gamma(s, x) for |s| < 0.1 and x of order 1, where Gamma(s) and x^s/s
// have cancelling poles.
template <class Real>
std::complex<Real> incgamma_near_zero(std::complex<Real> s, Real x) {
  using C = std::complex<Real>;
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real lx = std::log(x);
  const C g0 = gamma1p_minus_one_over(s) - lx * expm1_over(s * lx);
  C sum{0};
  Real fact_term = 1;  // (-x)^n / n!
  for (int n = 1; n < 2000; ++n) {
    fact_term *= -x / Real(n);
    const C term = fact_term / (s + Real(n));
    sum += term;
    if (std::abs(term) < eps * std::abs(sum)) break;
  }
  return g0 - std::exp(s * lx) * sum;
}

template <class Real>
std::complex<Real> incgamma_unchecked(std::complex<Real> s, Real x) {
  const Real re = s.real();
  const Real im_abs = std::abs(s.imag());
  if (x >= re + 1 && x >= Real(0.25) * im_abs) return incgamma_cf(s, x);
  if (re >= Real(0.5)) return incgamma_series(s, x);
  // Shift up to Re in [1/2, 3/2) and recur downwards.
  const int m = static_cast<int>(std::ceil(Real(0.5) - re));
  std::complex<Real> g = incgamma_series(s + Real(m), x);
  for (int j = m - 1; j >= 0; --j) {
    const std::complex<Real> sj = s + Real(j);
    if (std::abs(sj) < Real(0.1)) {
      g = incgamma_near_zero(sj, x);
    } else {
      g = (g - std::exp(sj * std::log(x) - x)) / sj;
    }
  }
  return g;
}

}  // namespace detail

/// Upper incomplete gamma function Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt for
/// complex s and real x > 0. Continued fraction where x dominates s, power
/// series otherwise, with downward recurrence for Re(s) < 1/2.
template <class Real>
std::complex<Real> upper_incomplete_gamma(std::complex<Real> s, Real x) {
  using R = IncGammaRange;
  if (!(x >= Real(R::x_min) && x <= Real(R::x_max)) || !(s.real() >= Real(R::re_min)) ||
      !(s.real() <= Real(R::re_max)) || !(std::abs(s.imag()) <= Real(R::im_abs_max))) {
    throw InvalidArgument(
        "upper_incomplete_gamma: arguments outside Re(s) in [-30, 40], |Im(s)| <= 40, "
        "x in [1e-4, 300]");
  }
  return detail::incgamma_unchecked(s, x);
}

/// Real-order version used by the truncation bounds; accepts any x > 0 and
/// returns 0 once the value underflows.
template <class Real>
Real upper_incomplete_gamma_real(Real s, Real x) {
  if (!(x > 0)) throw InvalidArgument("upper_incomplete_gamma_real: x must be positive");
  if (x > Real(700) + 2 * std::abs(s)) return 0;
  return detail::incgamma_unchecked(std::complex<Real>(s, 0), x).real();
}

}  // namespace converse
