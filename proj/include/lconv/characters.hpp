#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lconv/numeric.hpp"

namespace converse {

/// A Dirichlet character mod q, labelled by its Conrey index m (the character
/// chi_q(m, .)). Values are stored exactly: chi(n) = e(t(n)/order) with an
/// integer exponent table, and 0 off the units. Immutable once built.
class DirichletCharacter {
public:
  /// chi_q(m, .); throws InvalidArgument unless q >= 1 and gcd(m, q) = 1.
  DirichletCharacter(std::uint64_t modulus, std::uint64_t label);

  std::uint64_t modulus() const noexcept { return modulus_; }
  std::uint64_t label() const noexcept { return label_; }
  std::uint64_t order() const noexcept { return order_; }
  int parity() const noexcept { return parity_; }
  std::uint64_t conductor() const noexcept { return conductor_; }
  bool is_primitive() const noexcept { return conductor_ == modulus_; }
  bool is_trivial() const noexcept { return order_ == 1; }

  /// Exponent t with chi(n) = e(t/order), or nullopt when gcd(n, q) > 1.
  std::optional<std::uint64_t> exponent(std::int64_t n) const;

  /// Exponent of chi(n) over a common denominator `den` (a multiple of order).
  std::optional<std::uint64_t> exponent_over(std::int64_t n, std::uint64_t den) const;

  template <class Real = double>
  std::complex<Real> value(std::int64_t n) const {
    const auto t = exponent(n);
    if (!t) return {0, 0};
    return unit_root<Real>(static_cast<std::int64_t>(*t), static_cast<std::int64_t>(order_));
  }
  cplx operator()(std::int64_t n) const { return value<double>(n); }

  DirichletCharacter conj() const;

  /// "q.m", the Conrey label.
  std::string name() const;

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.modulus_ == b.modulus_ && a.label_ == b.label_;
  }

private:
  std::uint64_t modulus_;
  std::uint64_t label_;
  std::uint64_t order_ = 1;
  int parity_ = 1;
  std::uint64_t conductor_ = 1;
  // Exponent over order_ for each residue 0..q-1; -1 marks non-units.
  std::vector<std::int64_t> table_;
};

/// All phi(q) characters mod q, ordered by Conrey label (the trivial one first).
std::vector<DirichletCharacter> characters_mod(std::uint64_t q);

/// Parses "q.m".
DirichletCharacter parse_character(const std::string& text);

/// tau(chi) = sum_{a=1}^{q} chi(a) e(a/q).
template <class Real = double>
std::complex<Real> gauss_sum(const DirichletCharacter& chi) {
  CompensatedSum<std::complex<Real>> acc;
  const auto q = static_cast<std::int64_t>(chi.modulus());
  for (std::int64_t a = 1; a <= q; ++a) {
    const auto t = chi.exponent(a);
    if (!t) continue;
    const auto order = static_cast<std::int64_t>(chi.order());
    // chi(a) e(a/q) = e((t q + a order) / (order q)), one phase evaluation.
    acc.add(unit_root<Real>(static_cast<std::int64_t>(*t) * q + a * order, order * q));
  }
  return acc.value();
}

/// c_q(n) by direct summation of e(an/q) over units a; exact integer result.
std::int64_t ramanujan_sum(std::uint64_t q, std::int64_t n);

/// |e(n/q) - [1 - q/(q-1) chi0(n) + 1/(q-1) sum_{chi != chi0} tau(conj chi) chi(n)]|
/// for prime q.
double verify_additive_fourier_identity(std::uint64_t q, std::int64_t n);

/// Exact column orthogonality: (1/phi(q)) sum_chi chi(a) conj(chi(b)) equals
/// [a == b mod q], decided in Z[zeta_L]. `a` and `b` must be units mod q.
bool column_orthogonality_exact(const std::vector<DirichletCharacter>& chars, std::int64_t a,
                                std::int64_t b);

/// Exact row orthogonality: sum_n chi1(n) conj(chi2(n)) equals phi(q)[chi1 == chi2].
bool row_orthogonality_exact(const DirichletCharacter& chi1, const DirichletCharacter& chi2);

}  // namespace converse
