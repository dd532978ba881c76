#include "lconv/qexp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lconv/error.hpp"
#include "lconv/incgamma.hpp"

namespace converse {

std::string IntMat2::str() const {
  return "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(c) + "," +
         std::to_string(d) + "]]";
}

UpperHalfPoint::UpperHalfPoint(cplx z) : z_(z) {
  if (!(z.imag() > 0)) throw InvalidArgument("point is not in the upper half-plane");
}

double qexp_tail_bound(double growth, unsigned weight, double y, std::size_t X) {
  const double k = weight;
  const double c = 2 * std::numbers::pi * y;
  // t^{(k+1)/2} e^{-ct} decreases for t >= (k+1)/(2c).
  if (static_cast<double>(X) < (k + 1) / (2 * c)) return std::numeric_limits<double>::infinity();
  const double a = (k + 3) / 2;
  const double g = upper_incomplete_gamma_real<double>(a, c * static_cast<double>(X));
  return 2 * growth * std::pow(c, -a) * g;
}

namespace {

std::size_t minimal_truncation(double growth, unsigned weight, double y, double target) {
  std::size_t X = 16;
  while (X < (std::size_t{1} << 40U) && !(qexp_tail_bound(growth, weight, y, X) <= target)) X *= 2;
  std::size_t lo = X / 2, hi = X;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (qexp_tail_bound(growth, weight, y, mid) <= target ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

EvalResult eval_form(const CoefficientSeries& s, const UpperHalfPoint& z, bool conjugated,
                     double precision) {
  using R = long double;
  const R x = z.x();
  const R y = z.y();
  const R two_pi = 2 * std::numbers::pi_v<R>;
  CompensatedSum<std::complex<R>> acc;
  const std::size_t X = s.length();
  EvalResult out;
  for (std::size_t n = 1; n <= X; ++n) {
    const R decay = std::exp(-two_pi * static_cast<R>(n) * y);
    if (decay == 0) break;
    R frac = static_cast<R>(n) * x;
    frac -= std::floor(frac);
    const std::complex<R> phase = std::polar<R>(decay, two_pi * frac);
    std::complex<R> f = s.raw(n);
    if (conjugated) f = std::conj(f);
    acc.add(f * phase);
    out.terms = n;
  }
  const auto v = acc.value();
  out.value = {static_cast<double>(v.real()), static_cast<double>(v.imag())};
  out.magnitude = static_cast<double>(acc.magnitude());
  out.tail_bound = qexp_tail_bound(s.growth_constant(), s.weight(), z.y(), X);
  const double target = precision * std::max(out.magnitude, std::numeric_limits<double>::min());
  if (!(out.tail_bound <= target)) {
    throw InsufficientTruncation(
        "q-expansion at Im z = " + format_g17(z.y()) + " with X = " + std::to_string(X) +
            " has tail bound " + format_g17(out.tail_bound) + "; need X >= " +
            std::to_string(minimal_truncation(s.growth_constant(), s.weight(), z.y(), target)),
        minimal_truncation(s.growth_constant(), s.weight(), z.y(), target));
  }
  return out;
}

UpperHalfPoint act(const Mat2& g, const UpperHalfPoint& z) {
  using C = std::complex<long double>;
  const C zz{z.x(), z.y()};
  const C w = (g.a * zz + g.b) / (g.c * zz + g.d);
  return UpperHalfPoint(cplx(static_cast<double>(w.real()), static_cast<double>(w.imag())));
}

std::pair<Mat2, int> normalize_sign(const Mat2& g, unsigned weight) {
  if (g.c < 0 || (g.c == 0 && g.d < 0)) {
    return {Mat2(-g.a, -g.b, -g.c, -g.d), weight % 2 == 0 ? 1 : -1};
  }
  return {g, 1};
}

EvalResult slash_eval(const CoefficientSeries& s, const Mat2& gamma, const UpperHalfPoint& z,
                      bool conjugated, double precision) {
  const long double det = gamma.det();
  if (!(det > 0)) throw InvalidArgument("slash operator needs a matrix of positive determinant");
  const auto [g, sign] = normalize_sign(gamma, s.weight());
  const UpperHalfPoint w = act(g, z);
  EvalResult inner = eval_form(s, w, conjugated, precision);
  using C = std::complex<long double>;
  const C czd = g.c * C(z.x(), z.y()) + g.d;
  const auto k = static_cast<int>(s.weight());
  const C factor = std::pow(det, static_cast<long double>(k) / 2) / std::pow(czd, k) *
                   static_cast<long double>(sign);
  const C v = factor * C(inner.value.real(), inner.value.imag());
  const double scale = static_cast<double>(std::abs(factor));
  inner.value = {static_cast<double>(v.real()), static_cast<double>(v.imag())};
  inner.tail_bound *= scale;
  inner.magnitude *= scale;
  return inner;
}

MatrixIdentityReport check_matrix_identity(std::int64_t N, std::int64_t M) {
  if (N < 1) throw InvalidArgument("matrix identity: N must be positive");
  MatrixIdentityReport rep;
  rep.N = N;
  rep.M = M;
  const IntMat2 H = IntMat2::fricke(N);
  const IntMat2 PM = IntMat2::translation(M);
  const IntMat2 Pinv = IntMat2::translation(-1);
  const std::int64_t q = M * N + 1;
  rep.product_ok = (H * PM * H) == IntMat2{-N, 0, M * N * N, -N};
  rep.square_ok = (H * H) == IntMat2::identity().scaled(-N);
  rep.top_row_ok = (Pinv * H * PM * H) == IntMat2{q, -1, 1 - q, 1}.scaled(-N);
  rep.gamma_ok = (H * Pinv * H * PM * H) == IntMat2{q - 1, -1, N * q, -N}.scaled(-N);
  const IntMat2 adjH{0, 1, -N, 0};
  rep.lower_ok = (H * Pinv * adjH) == IntMat2{1, 0, N, 1}.scaled(N);
  return rep;
}

namespace {

struct SidePair {
  EvalResult left, right;
};

SidePair evaluate_sides(const CoefficientSeries& s, const Mat2& gamma, const UpperHalfPoint& z,
                        bool conjugated_left, bool conjugated_right, double precision) {
  return {slash_eval(s, gamma, z, conjugated_left, precision),
          eval_form(s, z, conjugated_right, precision)};
}

}  // namespace

PhaseEstimate estimate_phase(const CoefficientSeries& s, const Mat2& gamma,
                             const std::vector<UpperHalfPoint>& points, bool conjugated_left,
                             bool conjugated_right, double precision) {
  if (points.size() < 2) throw InvalidArgument("estimate_phase needs at least two points");
  PhaseEstimate out;
  bool have_omega = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto sides = evaluate_sides(s, gamma, points[i], conjugated_left, conjugated_right, precision);
    if (std::abs(sides.right.value) <= 1e-12 * sides.right.magnitude ||
        std::abs(sides.right.value) < 1e-300) {
      out.notices.push_back("point " + std::to_string(i) + " skipped: denominator near zero");
      continue;
    }
    const cplx ratio = sides.left.value / sides.right.value;
    ++out.points_used;
    if (!have_omega) {
      out.omega = ratio;
      have_omega = true;
    } else {
      out.spread = std::max(out.spread, std::abs(ratio - out.omega));
    }
  }
  if (!have_omega) throw NumericError("estimate_phase: every point was degenerate");
  out.unimodularity_defect = std::abs(std::abs(out.omega) - 1);
  return out;
}

double check_modularity(const CoefficientSeries& s, const Mat2& gamma, cplx omega,
                        const std::vector<UpperHalfPoint>& points, bool conjugated_left,
                        bool conjugated_right, double precision) {
  double worst = 0;
  for (const auto& z : points) {
    const auto sides = evaluate_sides(s, gamma, z, conjugated_left, conjugated_right, precision);
    const double denom = std::max(std::abs(sides.right.value), 1e-30);
    worst = std::max(worst, std::abs(sides.left.value - omega * sides.right.value) / denom);
  }
  return worst;
}

TwistSpec TwistSpec::character(const DirichletCharacter& chi) {
  TwistSpec t;
  t.kind = Kind::Character;
  t.q = chi.modulus();
  t.chi = chi;
  return t;
}

TwistSpec TwistSpec::ramanujan(std::uint64_t q, cplx r) {
  TwistSpec t;
  t.kind = Kind::Ramanujan;
  t.q = q;
  t.r = r;
  return t;
}

std::string TwistSpec::name() const {
  switch (kind) {
    case Kind::None: return "1";
    case Kind::Character: return chi->name();
    case Kind::Ramanujan: return "c" + std::to_string(q) + "+r";
  }
  return "?";
}

CoefficientSeries twisted_coeffs(const CoefficientSeries& s, const TwistSpec& twist,
                                 TwistOptions options) {
  if (twist.kind == TwistSpec::Kind::None) return s;
  const std::uint64_t q = twist.q;
  const std::uint64_t N = s.level();
  if (!is_prime(q)) throw InvalidArgument("twist modulus " + std::to_string(q) + " is not prime");
  if (N % q == 0) throw InvalidArgument("twist modulus " + std::to_string(q) + " divides the level");
  if (options.require_congruence && q % N != 1 % N) {
    throw InvalidArgument("twist modulus " + std::to_string(q) + " is not 1 mod N = " +
                          std::to_string(N));
  }
  std::vector<cplxl> raw(s.length());
  double weight_bound = 1;
  if (twist.kind == TwistSpec::Kind::Character) {
    const auto& chi = *twist.chi;
    const std::complex<long double> tau =
        options.gauss_factor ? gauss_sum<long double>(chi.conj()) : std::complex<long double>(1);
    weight_bound = static_cast<double>(std::abs(tau));
    for (std::size_t n = 1; n <= s.length(); ++n) {
      raw[n - 1] = s.raw(n) * tau * chi.value<long double>(static_cast<std::int64_t>(n));
    }
  } else {
    const std::complex<long double> r{twist.r.real(), twist.r.imag()};
    std::vector<std::int64_t> cq(q);
    for (std::uint64_t t = 0; t < q; ++t) cq[t] = ramanujan_sum(q, static_cast<std::int64_t>(t));
    for (std::size_t n = 1; n <= s.length(); ++n) {
      raw[n - 1] = s.raw(n) * (static_cast<long double>(cq[n % q]) + r);
    }
    weight_bound = static_cast<double>(q - 1) + std::abs(twist.r);
  }
  return CoefficientSeries::from_raw(N * q * q, s.weight(), raw, Provenance::Twist,
                                     s.descriptor() + "@" + twist.name(),
                                     s.growth_constant() * weight_bound);
}

std::vector<UpperHalfPoint> balanced_points(const IntMat2& g) {
  static constexpr double offsets[][2] = {{0.0, 1.0}, {0.13, 1.1}, {-0.21, 0.93}, {0.37, 0.85}};
  std::vector<UpperHalfPoint> out;
  if (g.c == 0) {
    const double scale = std::sqrt(std::abs(static_cast<double>(g.d) / static_cast<double>(g.a)));
    for (const auto& o : offsets) out.emplace_back(o[0], o[1] * scale);
    return out;
  }
  const double c = static_cast<double>(g.c);
  const double base = -static_cast<double>(g.d) / c;
  for (const auto& o : offsets) out.emplace_back(base + o[0] / std::abs(c), o[1] / std::abs(c));
  return out;
}

std::vector<UpperHalfPoint> involution_points(std::uint64_t N, std::uint64_t q) {
  const double y = 1.0 / (static_cast<double>(q) * std::sqrt(static_cast<double>(N)));
  return {UpperHalfPoint(0.0, y), UpperHalfPoint(1.0 / static_cast<double>(q), y),
          UpperHalfPoint(1.0 / 3.0, y)};
}

}  // namespace converse
