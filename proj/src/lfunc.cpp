#include "lconv/lfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lconv/error.hpp"
#include "lconv/incgamma.hpp"

namespace converse {

double CompletedLContext::default_split() const {
  // 1/(q sqrt N) with level = N q^2.
  return 1.0 / std::sqrt(static_cast<double>(level));
}

void CompletedLContext::validate() const {
  if (level == 0) throw InvalidArgument("context: level must be positive");
  if (weight == 0) throw InvalidArgument("context: weight must be positive");
  if (Y < 0) throw InvalidArgument("context: split point must be positive");
  if (!(precision > 0)) throw InvalidArgument("context: precision target must be positive");
  if (precision_bits != 53 && precision_bits != 64) {
    throw InvalidArgument("context: precision_bits must be 53 (double) or 64 (long double)");
  }
}

CompletedLContext make_context(const CoefficientSeries& b, std::uint64_t twist_modulus,
                               double precision, int precision_bits) {
  CompletedLContext ctx;
  ctx.level = b.level();
  ctx.weight = b.weight();
  ctx.twist_modulus = twist_modulus;
  ctx.X = b.length();
  ctx.precision = precision;
  ctx.precision_bits = precision_bits;
  ctx.validate();
  return ctx;
}

namespace {

constexpr double kGammaArgMax = 300;

// Bound for 2 sum_{n > n0} |f_n| (2 pi n)^{-sigma} Gamma(sigma, 2 pi n Y) given
// |f_n| <= C d(n) n^{(k-1)/2} and d(n) <= 2 sqrt(n).
double split_tail(double growth, unsigned weight, double sigma, double Y, std::size_t n0) {
  const double k = weight;
  const double c = 2 * std::numbers::pi * Y;
  const double x0 = c * static_cast<double>(n0);
  if (k / 2 - 1 > 0 && static_cast<double>(n0) < (k / 2 - 1) / c) {
    return std::numeric_limits<double>::infinity();
  }
  double kappa = 1;
  if (sigma > 1) {
    if (x0 <= sigma - 1) return std::numeric_limits<double>::infinity();
    kappa = 1 / (1 - (sigma - 1) / x0);
  }
  return 2 * growth * kappa / std::numbers::pi * std::pow(Y, sigma - 1) * std::pow(c, -k / 2) *
         upper_incomplete_gamma_real<double>(k / 2, x0);
}

template <class Real>
LValueResult split_impl(const CoefficientSeries& b, cplx s_in, double Y,
                        const CompletedLContext& ctx) {
  using C = std::complex<Real>;
  const Real k = static_cast<Real>(ctx.weight);
  const Real M = static_cast<Real>(ctx.level);
  const C s(static_cast<Real>(s_in.real()), static_cast<Real>(s_in.imag()));
  const C sp = s + (k - 1) / 2;
  const C sl = k - sp;
  const Real two_pi = 2 * std::numbers::pi_v<Real>;
  const Real Yu = static_cast<Real>(Y);
  const Real Yl = 1 / (M * Yu);
  const std::size_t X = ctx.X == 0 ? b.length() : std::min(ctx.X, b.length());

  CompensatedSum<C> up, low;
  std::size_t nu = 0, nl = 0;
  for (std::size_t n = 1; n <= X; ++n) {
    const Real xu = two_pi * static_cast<Real>(n) * Yu;
    const Real xl = two_pi * static_cast<Real>(n) * Yl;
    if (xu > kGammaArgMax && xl > kGammaArgMax) break;
    const C f = b.raw_as<Real>(n);
    const Real log2pin = std::log(two_pi * static_cast<Real>(n));
    if (xu <= kGammaArgMax) {
      if (f != C(0)) up.add(f * std::exp(-sp * log2pin) * upper_incomplete_gamma(sp, xu));
      nu = n;
    }
    if (xl <= kGammaArgMax) {
      if (f != C(0)) low.add(std::conj(f) * std::exp(-sl * log2pin) * upper_incomplete_gamma(sl, xl));
      nl = n;
    }
  }
  const C mfac = std::exp((Real(0.5) - s) * std::log(M));
  const C U = Real(2) * up.value();
  const C L = Real(2) * mfac * low.value();

  LValueResult out;
  out.upper = {static_cast<double>(U.real()), static_cast<double>(U.imag())};
  out.lower = {static_cast<double>(L.real()), static_cast<double>(L.imag())};
  out.split_point_used = Y;
  out.terms_used = std::max(nu, nl);
  out.magnitude = std::abs(out.upper) + std::abs(out.lower);

  const double growth = b.growth_constant();
  const double mabs = static_cast<double>(std::abs(mfac));
  const auto tail_u = [&](std::size_t n0) {
    return split_tail(growth, ctx.weight, static_cast<double>(sp.real()), Y, n0);
  };
  const auto tail_l = [&](std::size_t n0) {
    return mabs * split_tail(growth, ctx.weight, static_cast<double>(sl.real()),
                             static_cast<double>(Yl), n0);
  };
  const double tails = tail_u(std::max<std::size_t>(nu, 1)) + tail_l(std::max<std::size_t>(nl, 1));
  const double gamma_rel = ctx.precision_bits == 64 ? 1e-16 : 1e-13;
  const double roundoff =
      (gamma_rel + 16 * static_cast<double>(std::numeric_limits<Real>::epsilon())) *
      (2 * static_cast<double>(up.magnitude()) + 2 * mabs * static_cast<double>(low.magnitude()));
  out.error_estimate = tails + roundoff;

  const double target = ctx.precision * std::max(out.magnitude, std::numeric_limits<double>::min());
  if (!(tails <= target)) {
    std::size_t need = std::max<std::size_t>(X, 1);
    while (need < (std::size_t{1} << 40U) && !(tail_u(need) + tail_l(need) <= target)) need *= 2;
    throw InsufficientTruncation("completed L-value at Y = " + format_g17(Y) + " with X = " +
                                     std::to_string(X) + " has tail " + format_g17(tails) +
                                     "; need X >= " + std::to_string(need),
                                 need);
  }
  return out;
}

}  // namespace

LValueResult split_sums(const CoefficientSeries& b, cplx s, double Y, const CompletedLContext& ctx) {
  ctx.validate();
  if (!(Y > 0)) throw InvalidArgument("split point must be positive");
  if (ctx.precision_bits == 64) return split_impl<long double>(b, s, Y, ctx);
  return split_impl<double>(b, s, Y, ctx);
}

LValueResult lambda_completed(const CoefficientSeries& b, cplx s, const CompletedLContext& ctx,
                              std::optional<cplx> root_number) {
  if (!root_number) throw InvalidArgument("lambda_completed: missing root number");
  const double Y = ctx.Y > 0 ? ctx.Y : ctx.default_split();
  LValueResult r = split_sums(b, s, Y, ctx);
  r.value = r.upper + *root_number * r.lower;
  r.error_estimate *= std::max(1.0, std::abs(*root_number));
  return r;
}

CoefficientSeries twist_for_lfunction(const CoefficientSeries& f, const TwistSpec& twist) {
  return twisted_coeffs(f, twist, TwistOptions{.gauss_factor = false, .require_congruence = false});
}

LValueResult lambda_completed(const CoefficientSeries& f, const TwistSpec& twist, cplx s,
                              const CompletedLContext& ctx, std::optional<cplx> root_number) {
  const CoefficientSeries b = twist_for_lfunction(f, twist);
  CompletedLContext c = ctx;
  c.level = b.level();
  c.weight = b.weight();
  c.twist_modulus = twist.q;
  return lambda_completed(b, s, c, root_number);
}

YIndependence y_independence(const CoefficientSeries& b, cplx s, cplx root_number, double Y1,
                             double Y2, const CompletedLContext& ctx) {
  const auto r1 = split_sums(b, s, Y1, ctx);
  const auto r2 = split_sums(b, s, Y2, ctx);
  const cplx v1 = r1.upper + root_number * r1.lower;
  const cplx v2 = r2.upper + root_number * r2.lower;
  YIndependence out;
  out.absolute = std::abs(v1 - v2);
  out.relative = out.absolute / std::max(std::max(r1.magnitude, r2.magnitude), 1e-300);
  out.error_estimate = r1.error_estimate + r2.error_estimate;
  return out;
}

double dirichlet_tail_bound(double growth, double sigma, std::size_t X) {
  if (sigma <= 1.5) return std::numeric_limits<double>::infinity();
  return 2 * growth * std::pow(static_cast<double>(X), 1.5 - sigma) / (sigma - 1.5);
}

AdditiveTwistResult additive_twist_value(const CoefficientSeries& f, std::int64_t a,
                                         std::uint64_t q, cplx s, double max_tail) {
  if (q == 0) throw InvalidArgument("additive twist: q must be positive");
  const std::size_t X = f.length();
  const double sigma = s.real();
  const double tail = dirichlet_tail_bound(f.growth_constant(), sigma, X);
  if (!(tail <= max_tail)) {
    double lo = 1.5, hi = 2.0;
    while (!(dirichlet_tail_bound(f.growth_constant(), hi, X) <= max_tail) && hi < 1e4) hi *= 2;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (dirichlet_tail_bound(f.growth_constant(), mid, X) <= max_tail ? hi : lo) = mid;
    }
    throw InvalidArgument("additive twist: Re(s) = " + format_g17(sigma) +
                          " is too small for X = " + std::to_string(X) +
                          "; minimal admissible Re(s) is " + format_g17(hi));
  }
  const auto qi = static_cast<std::int64_t>(q);
  const std::int64_t ar = mod_floor(a, qi);
  CompensatedSum<cplx> acc;
  for (std::size_t n = 1; n <= X; ++n) {
    const cplx ns = std::exp(-s * std::log(static_cast<double>(n)));
    const auto phase = unit_root<double>(mod_floor(static_cast<std::int64_t>(n % q) * ar, qi), qi);
    acc.add(f.a(n) * phase * ns);
  }
  return {acc.value(), tail, X};
}

TwistIdentityResult verify_twist_identity(const CoefficientSeries& f, std::uint64_t q, cplx s) {
  if (!is_prime(q)) throw InvalidArgument("twist identity: q must be prime");
  if (f.level() % q == 0) throw InvalidArgument("twist identity: q divides the level");
  if (!(s.real() > 1.5)) throw InvalidArgument("twist identity: needs Re(s) > 3/2");
  const std::size_t X = f.length();
  if (q * q > X) {
    throw InsufficientTruncation("twist identity needs a_{q^2}; X = " + std::to_string(X), q * q);
  }
  const auto qi = static_cast<std::int64_t>(q);
  const double qd = static_cast<double>(q);
  const cplx lambda = f.a(q);
  const cplx mu = lambda * lambda - f.a(q * q);

  std::vector<DirichletCharacter> nontrivial;
  std::vector<cplx> taus;
  for (const auto& chi : characters_mod(q)) {
    if (chi.is_trivial()) continue;
    nontrivial.push_back(chi);
    taus.push_back(gauss_sum(chi.conj()));
  }
  // Right-hand side of the Fourier identity at each residue class.
  std::vector<cplx> fourier(q);
  for (std::int64_t t = 0; t < qi; ++t) {
    CompensatedSum<cplx> acc;
    acc.add(1.0);
    if (t != 0) acc.add(-qd / (qd - 1));
    for (std::size_t i = 0; i < nontrivial.size(); ++i) acc.add(taus[i] * nontrivial[i](t) / (qd - 1));
    fourier[static_cast<std::size_t>(t)] = acc.value();
  }

  CompensatedSum<cplx> lhs, lf, mid;
  std::vector<CompensatedSum<cplx>> twists(nontrivial.size());
  TwistIdentityResult out;
  for (std::size_t n = 1; n <= X; ++n) {
    const cplx ns = std::exp(-s * std::log(static_cast<double>(n)));
    const cplx an = f.a(n);
    const auto res = static_cast<std::int64_t>(n % q);
    const cplx en = unit_root<double>(res, qi);
    lhs.add(an * en * ns);
    lf.add(an * ns);
    cplx m = an;
    if (n % q == 0) m -= lambda * f.a(n / q);
    if (n % (q * q) == 0) m += mu * f.a(n / (q * q));
    mid.add(m * ns);
    for (std::size_t i = 0; i < nontrivial.size(); ++i) twists[i].add(an * nontrivial[i](res) * ns);
    out.coefficientwise_defect =
        std::max(out.coefficientwise_defect, std::abs(an * en - an * fourier[static_cast<std::size_t>(res)]));
  }
  CompensatedSum<cplx> rhs;
  rhs.add(lf.value());
  rhs.add(-qd / (qd - 1) * mid.value());
  for (std::size_t i = 0; i < nontrivial.size(); ++i) rhs.add(taus[i] * twists[i].value() / (qd - 1));
  out.numeric_residual = std::abs(lhs.value() - rhs.value());
  out.tail_bound = dirichlet_tail_bound(f.growth_constant(), s.real(), X);
  out.terms = X;
  return out;
}

std::vector<cplx> default_root_number_samples() { return {0.5, 0.75, 1.0}; }

RootNumberEstimate estimate_root_number(const CoefficientSeries& b, const CompletedLContext& ctx,
                                        const std::vector<cplx>& s_samples) {
  if (s_samples.size() < 3) throw InvalidArgument("root number estimate needs at least 3 samples");
  for (std::size_t i = 0; i < s_samples.size(); ++i) {
    const double re = s_samples[i].real();
    if (re < 0.5 || re > 1.5) throw InvalidArgument("root number samples need Re(s) in [1/2, 3/2]");
    for (std::size_t j = 0; j < i; ++j) {
      if (s_samples[j].real() == re) throw InvalidArgument("root number samples need distinct real parts");
    }
  }
  const double Y0 = ctx.Y > 0 ? ctx.Y : ctx.default_split();
  const double Y1 = 0.8 * Y0, Y2 = 1.25 * Y0;
  RootNumberEstimate out;
  CompensatedSum<cplx> mean;
  for (const cplx s : s_samples) {
    const auto r1 = split_sums(b, s, Y1, ctx);
    const auto r2 = split_sums(b, s, Y2, ctx);
    const cplx dl = r2.lower - r1.lower;
    if (std::abs(dl) <= 1e-6 * std::max(r1.magnitude, r2.magnitude)) {
      out.violated = true;
      out.diagnostic = "functional equation violated: split sums do not depend on Y at s = " +
                       format_g17(s.real()) + (s.imag() >= 0 ? "+" : "") + format_g17(s.imag()) + "i";
      continue;
    }
    const cplx eps = (r1.upper - r2.upper) / dl;
    out.samples.push_back(eps);
    mean.add(eps);
  }
  if (out.samples.empty()) throw Error(ErrorCode::FunctionalEquation, out.diagnostic);
  out.epsilon = mean.value() / static_cast<double>(out.samples.size());
  for (const cplx e : out.samples) out.spread = std::max(out.spread, std::abs(e - out.epsilon));
  out.unimodularity_defect = std::abs(std::abs(out.epsilon) - 1);
  if (out.unimodularity_defect > out.spread + ctx.precision) {
    out.violated = true;
    out.diagnostic = "functional equation violated: no unimodular root number (|eps| - 1 = " +
                     format_g17(out.unimodularity_defect) + ")";
  }
  return out;
}

}  // namespace converse
