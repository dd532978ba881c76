#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lconv/characters.hpp"
#include "lconv/numeric.hpp"

namespace converse {

using Int128 = __int128;
using cplxl = std::complex<long double>;

enum class Provenance { EtaProduct, CharacterPair, ExternalFile, Twist };

std::string to_string(Provenance p);

struct EtaFactor {
  std::uint64_t scale;   // m in (1 - q^{mn})
  std::int64_t exponent; // r
};

/// a_n = f_n n^{-(k-1)/2}.
template <class Real>
std::complex<Real> normalize(std::complex<Real> f, std::uint64_t n, unsigned k) {
  return f * std::pow(static_cast<Real>(n), -static_cast<Real>(k - 1) / 2);
}
template <class Real>
std::complex<Real> denormalize(std::complex<Real> a, std::uint64_t n, unsigned k) {
  return a * std::pow(static_cast<Real>(n), static_cast<Real>(k - 1) / 2);
}

/// Coefficients a_1..a_X of a Dirichlet series in the analytic normalization,
/// with the raw Fourier coefficients f_n = a_n n^{(k-1)/2} kept alongside.
///
/// Base series (eta products, character pairs, files) have a_1 = 1 and are
/// expected to be multiplicative; twisted series are linear combinations of
/// slashed base series and carry no such invariant.
class CoefficientSeries {
public:
  CoefficientSeries(std::uint64_t level, unsigned weight, std::vector<cplx> a, Provenance prov,
                    std::string descriptor, double growth_constant);

  std::uint64_t level() const noexcept { return level_; }
  unsigned weight() const noexcept { return weight_; }
  std::size_t length() const noexcept { return a_.size(); }
  Provenance provenance() const noexcept { return provenance_; }
  const std::string& descriptor() const noexcept { return descriptor_; }
  double growth_constant() const noexcept { return growth_; }

  /// 1-based; n must be in [1, length()].
  cplx a(std::size_t n) const { return a_[n - 1]; }
  cplxl raw(std::size_t n) const { return raw_[n - 1]; }
  template <class Real>
  std::complex<Real> raw_as(std::size_t n) const {
    const auto f = raw_[n - 1];
    return {static_cast<Real>(f.real()), static_cast<Real>(f.imag())};
  }
  const std::vector<cplx>& normalized() const noexcept { return a_; }

  /// Exact integer f_n when the series came from an eta product and was not
  /// modified afterwards.
  const std::vector<Int128>* exact_raw() const noexcept {
    return exact_ ? exact_.get() : nullptr;
  }

  /// a_n for any n >= 1, from the table or from a closed-form generator when the
  /// provenance has one (character pairs). nullopt if n is out of reach.
  std::optional<cplx> coefficient(std::uint64_t n) const;
  bool has_generator() const noexcept { return static_cast<bool>(generator_); }

  /// Copy with a_n += delta (raw data adjusted, exact data dropped).
  CoefficientSeries perturbed(std::size_t n, cplx delta) const;

  /// Copy restricted to the first `length` terms.
  CoefficientSeries truncated(std::size_t length) const;

  /// Build from raw coefficients f_n (any normalization of a_1 allowed).
  static CoefficientSeries from_raw(std::uint64_t level, unsigned weight,
                                    const std::vector<cplxl>& raw, Provenance prov,
                                    std::string descriptor, double growth_constant);

  void set_exact(std::vector<Int128> exact);
  void set_generator(std::function<cplx(std::uint64_t)> gen);

private:
  std::uint64_t level_;
  unsigned weight_;
  std::vector<cplx> a_;
  std::vector<cplxl> raw_;
  Provenance provenance_;
  std::string descriptor_;
  double growth_;
  std::shared_ptr<const std::vector<Int128>> exact_;
  std::function<cplx(std::uint64_t)> generator_;
};

/// q * prod_n prod_{(m, r)} (1 - q^{mn})^r expanded to X terms in exact
/// integers. Rejects specs whose leading exponent sum(m r)/24 is not 1.
CoefficientSeries eta_product_coeffs(const std::vector<EtaFactor>& spec, unsigned weight,
                                     std::uint64_t level, std::size_t X);

/// a_n = sum_{d | n} xi1(n/d) xi2(d), weight 1, level N1 N2. Both characters
/// must be primitive, xi1 even and xi2 odd.
CoefficientSeries eisenstein_coeffs(const DirichletCharacter& xi1, const DirichletCharacter& xi2,
                                    std::size_t X);

struct LoadResult {
  CoefficientSeries series;
  std::vector<std::uint64_t> multiplicativity_violations;
};

/// Reads `n,re,im` rows (optional `# N=.. k=.. C=..` header). level/weight of 0
/// mean "take from the header"; X = 0 means all rows.
LoadResult load_coeffs(const std::string& path, std::uint64_t level, unsigned weight,
                       std::size_t X);
LoadResult parse_coeffs(std::istream& in, std::uint64_t level, unsigned weight, std::size_t X);
void save_coeffs(const CoefficientSeries& s, const std::string& path);
void write_coeffs(const CoefficientSeries& s, std::ostream& out);

/// Indices n whose canonical split n = p^e m (p the least prime factor, m > 1)
/// violates a_n = a_{p^e} a_m beyond a relative 1e-12. Every coprime product
/// identity follows from these by induction.
std::vector<std::uint64_t> check_multiplicativity(const CoefficientSeries& s, double tol = 1e-12);

/// Local data at a prime q: lambda = a_q, mu = a_q^2 - a_{q^2}, the unimodular
/// epsilon and r = 1 - epsilon conj(mu), and the formal inverse c_0..c_J of
/// sum_j a_{q^j} z^j.
struct EulerFactorData {
  std::uint64_t q = 0;
  unsigned degree_cap = 0;
  cplx lambda;
  cplx mu;
  cplx epsilon{1, 0};
  cplx r;
  std::vector<cplx> inverse;       // c_0..c_J
  double defect = 0;               // max_{3<=j<=J} |c_j|, 0 if J < 3
  double hecke_defect = 0;         // max_j |a_{q^{j+1}} - lambda a_{q^j} + mu a_{q^{j-1}}|
  std::optional<bool> exact_degree_two;  // exact integer verdict when available
  double min_root_modulus = 0;     // of 1 - lambda z + mu z^2; +inf when constant
  bool roots_ok = true;            // all roots satisfy |z| >= q^{-1/2}
};

/// Degree cap the series can support at q: min(cap, floor(log_q X)), or `cap`
/// when the series has a closed-form generator.
unsigned supported_degree(const CoefficientSeries& s, std::uint64_t q, unsigned cap = 6);

EulerFactorData euler_factor_inverse(const CoefficientSeries& s, std::uint64_t q,
                                     unsigned J = 6);

/// Threshold separating "polynomial of degree <= 2" from failure.
inline constexpr double kDegreeTwoDefectTolerance = 1e-9;

}  // namespace converse
