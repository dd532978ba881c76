#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lconv/qexp.hpp"
#include "lconv/series.hpp"

namespace converse {

/// Evaluation context for a completed L-value. `level` is the conductor of the
/// twisted object (N, or N q^2 for twists); Y = 0 selects the default split point.
struct CompletedLContext {
  std::uint64_t level = 1;
  unsigned weight = 2;
  std::uint64_t twist_modulus = 1;
  double Y = 0;
  std::size_t X = 0;           // 0: use the whole series
  double precision = 1e-9;     // relative to the size of the two split sums
  int precision_bits = 53;     // 53 (double) or 64 (long double)

  /// 1/(q sqrt N) with N the untwisted level.
  double default_split() const;
  void validate() const;
};

/// Context matching a (possibly twisted) series.
CompletedLContext make_context(const CoefficientSeries& b, std::uint64_t twist_modulus,
                               double precision = 1e-9, int precision_bits = 53);

struct LValueResult {
  cplx value;
  double error_estimate = 0;
  double split_point_used = 0;
  std::size_t terms_used = 0;
  cplx upper;          // 2 sum b_n (2 pi n)^{-s'} Gamma(s', 2 pi n Y)
  cplx lower;          // M^{1/2-s} 2 sum conj(b_n) (2 pi n)^{-(k-s')} Gamma(k-s', 2 pi n/(M Y))
  double magnitude = 0;  // |upper| + |lower|
};

/// The two split sums at Y with their tails; Lambda(s) = upper + eps * lower.
LValueResult split_sums(const CoefficientSeries& b, cplx s, double Y, const CompletedLContext& ctx);

/// Lambda(s) for the series b (already twisted, level M = b.level()) given the
/// root number of Lambda(s) = eps M^{1/2-s} conj Lambda(1 - conj s).
LValueResult lambda_completed(const CoefficientSeries& b, cplx s, const CompletedLContext& ctx,
                              std::optional<cplx> root_number);

/// Twisted coefficient series a_n w(n) with w(n) = chi(n) or c_q(n) + r, level
/// N q^2. The congruence q = 1 mod N is not required here.
CoefficientSeries twist_for_lfunction(const CoefficientSeries& f, const TwistSpec& twist);

/// Convenience form: twist, then evaluate.
LValueResult lambda_completed(const CoefficientSeries& f, const TwistSpec& twist, cplx s,
                              const CompletedLContext& ctx, std::optional<cplx> root_number);

/// |Lambda(s; Y1) - Lambda(s; Y2)| relative to the split-sum magnitude, and in
/// absolute terms.
struct YIndependence {
  double relative = 0;
  double absolute = 0;
  double error_estimate = 0;
};
YIndependence y_independence(const CoefficientSeries& b, cplx s, cplx root_number, double Y1,
                             double Y2, const CompletedLContext& ctx);

struct AdditiveTwistResult {
  cplx value;
  double tail_bound = 0;
  std::size_t terms = 0;
};

/// F(s, a/q) = sum_{n <= X} a_n n^{-s} e(na/q). The tail bound assumes
/// |a_n| <= C d(n) <= 2 C sqrt(n); rejected when it exceeds max_tail, naming the
/// smallest Re(s) that would do.
AdditiveTwistResult additive_twist_value(const CoefficientSeries& f, std::int64_t a,
                                         std::uint64_t q, cplx s, double max_tail = 1e-9);

/// Tail bound of additive_twist_value at real part sigma; +inf for sigma <= 3/2.
double dirichlet_tail_bound(double growth, double sigma, std::size_t X);

struct TwistIdentityResult {
  double numeric_residual = 0;        // all five series truncated at X
  double coefficientwise_defect = 0;  // max_n |a_n e(n/q) - a_n (Fourier expansion at n)|
  double tail_bound = 0;              // informational: truncation error of each series
  std::size_t terms = 0;
};

/// F(s, 1/q) = L - q/(q-1) L/F_q + 1/(q-1) sum_{chi != chi0} tau(conj chi) F(s, chi),
/// with 1/F_q the degree-2 polynomial 1 - lambda z + mu z^2 and all series cut
/// at the same X.
TwistIdentityResult verify_twist_identity(const CoefficientSeries& f, std::uint64_t q, cplx s);

struct RootNumberEstimate {
  cplx epsilon{1, 0};
  double spread = 0;
  double unimodularity_defect = 0;
  std::vector<cplx> samples;
  bool violated = false;
  std::string diagnostic;
};

/// Solves Lambda(s; Y1) = Lambda(s; Y2) for eps at each sample s, with
/// Y1 = 0.8 Y0 and Y2 = 1.25 Y0. Samples need distinct real parts in [1/2, 3/2].
RootNumberEstimate estimate_root_number(const CoefficientSeries& b, const CompletedLContext& ctx,
                                        const std::vector<cplx>& s_samples);

/// Default root-number samples 1/2, 3/4, 1.
std::vector<cplx> default_root_number_samples();

}  // namespace converse
