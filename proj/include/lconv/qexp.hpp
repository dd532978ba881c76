#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lconv/characters.hpp"
#include "lconv/series.hpp"

namespace converse {

/// Integer 2x2 matrix; group elements and the fixed matrices H_N, P.
struct IntMat2 {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  std::int64_t det() const { return a * d - b * c; }
  IntMat2 operator*(const IntMat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  IntMat2 scaled(std::int64_t s) const { return {s * a, s * b, s * c, s * d}; }
  bool operator==(const IntMat2&) const = default;

  static IntMat2 identity() { return {}; }
  /// H_N = [[0, -1], [N, 0]].
  static IntMat2 fricke(std::int64_t N) { return {0, -1, N, 0}; }
  /// P^M = [[1, M], [0, 1]].
  static IntMat2 translation(std::int64_t M) { return {1, M, 0, 1}; }
  std::string str() const;
};

/// Real 2x2 matrix with positive determinant.
struct Mat2 {
  long double a = 1, b = 0, c = 0, d = 1;

  Mat2() = default;
  Mat2(long double a_, long double b_, long double c_, long double d_) : a(a_), b(b_), c(c_), d(d_) {}
  Mat2(const IntMat2& m)  // NOLINT(google-explicit-constructor)
      : a(static_cast<long double>(m.a)), b(static_cast<long double>(m.b)),
        c(static_cast<long double>(m.c)), d(static_cast<long double>(m.d)) {}

  long double det() const { return a * d - b * c; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
};

/// A point of the upper half-plane.
class UpperHalfPoint {
public:
  explicit UpperHalfPoint(cplx z);
  UpperHalfPoint(double x, double y) : UpperHalfPoint(cplx(x, y)) {}
  cplx z() const noexcept { return z_; }
  double x() const noexcept { return z_.real(); }
  double y() const noexcept { return z_.imag(); }

private:
  cplx z_;
};

struct EvalResult {
  cplx value;
  double tail_bound = 0;  // rigorous bound on the omitted terms n > X
  double magnitude = 0;   // sum of |terms| actually added
  std::size_t terms = 0;
};

/// Default relative precision for q-expansion evaluation.
inline constexpr double kEvalPrecision = 1e-12;

/// Upper bound for sum_{n > X} C d(n) n^{(k-1)/2} e^{-2 pi n y}; +inf when X is
/// below the point where the integrand starts to decrease.
double qexp_tail_bound(double growth, unsigned weight, double y, std::size_t X);

/// f(z) = sum_{n <= X} f_n e(nz) (conj(f_n) when conjugated). Throws
/// InsufficientTruncation when the tail bound exceeds precision * magnitude.
EvalResult eval_form(const CoefficientSeries& s, const UpperHalfPoint& z, bool conjugated,
                     double precision = kEvalPrecision);

/// (g|gamma)(z) = det^{k/2} (cz+d)^{-k} g(gamma z). Integral weight, so the
/// factor (cz+d)^{-k} has no branch ambiguity; a negative scalar multiple of
/// gamma acts by (-1)^k.
EvalResult slash_eval(const CoefficientSeries& s, const Mat2& gamma, const UpperHalfPoint& z,
                      bool conjugated, double precision = kEvalPrecision);

/// gamma z for det gamma > 0.
UpperHalfPoint act(const Mat2& gamma, const UpperHalfPoint& z);

/// Representative with c > 0 (or c = 0, d > 0) and the sign (-1)^k picked up.
std::pair<Mat2, int> normalize_sign(const Mat2& gamma, unsigned weight);

struct MatrixIdentityReport {
  std::int64_t N = 0, M = 0;
  bool product_ok = false;   // H_N P^M H_N = [[-N, 0], [M N^2, -N]]
  bool square_ok = false;    // H_N^2 = -N I
  bool top_row_ok = false;   // P^{-1} H_N P^M H_N = -N [[q, -1], [1-q, 1]], q = MN+1
  bool gamma_ok = false;     // H_N P^{-1} H_N P^M H_N = -N [[q-1, -1], [Nq, -N]]
  bool lower_ok = false;     // H_N P^{-1} adj(H_N) = N [[1, 0], [N, 1]]
  bool ok() const { return product_ok && square_ok && top_row_ok && gamma_ok && lower_ok; }
};

/// Exact integer verification of the H_N / P product identities.
MatrixIdentityReport check_matrix_identity(std::int64_t N, std::int64_t M);

struct PhaseEstimate {
  cplx omega{1, 0};
  double spread = 0;
  double unimodularity_defect = 0;
  std::size_t points_used = 0;
  std::vector<std::string> notices;
};

/// omega with (s|gamma)(z) = omega * s(z), optionally with conjugated
/// coefficients on either side; omega from the first usable point, spread over
/// the rest.
PhaseEstimate estimate_phase(const CoefficientSeries& s, const Mat2& gamma,
                             const std::vector<UpperHalfPoint>& points, bool conjugated_left,
                             bool conjugated_right = false, double precision = kEvalPrecision);

/// max over points of |left - omega right| / max(|right|, 1e-30).
double check_modularity(const CoefficientSeries& s, const Mat2& gamma, cplx omega,
                        const std::vector<UpperHalfPoint>& points, bool conjugated_left,
                        bool conjugated_right = false, double precision = kEvalPrecision);

/// Twist data: a character twist by chi mod q, or the Ramanujan-sum weight
/// c_q(n) + r attached to the trivial character.
struct TwistSpec {
  enum class Kind { None, Character, Ramanujan };
  Kind kind = Kind::None;
  std::uint64_t q = 1;
  std::optional<DirichletCharacter> chi;
  cplx r{0, 0};

  static TwistSpec untwisted() { return {}; }
  static TwistSpec character(const DirichletCharacter& chi);
  static TwistSpec ramanujan(std::uint64_t q, cplx r);
  std::string name() const;
};

struct TwistOptions {
  bool gauss_factor = true;        // multiply character twists by tau(conj chi)
  bool require_congruence = true;  // insist on q = 1 mod N
};

/// Fourier coefficients of f_chi: f_n tau(conj chi) chi(n), or f_n (c_q(n) + r)
/// for the Ramanujan weight. Level bookkeeping becomes N q^2.
CoefficientSeries twisted_coeffs(const CoefficientSeries& s, const TwistSpec& twist,
                                 TwistOptions options = {});

/// Points z = -d/c + (x + iy)/|c| for a handful of offsets, so that z and gamma z
/// have comparable imaginary parts.
std::vector<UpperHalfPoint> balanced_points(const IntMat2& gamma);

/// The fixed-point scale of z -> -1/(N q^2 z): y = 1/(q sqrt N), x in {0, 1/q, 1/3}.
std::vector<UpperHalfPoint> involution_points(std::uint64_t N, std::uint64_t q);

}  // namespace converse
