#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lconv/characters.hpp"
#include "lconv/lfunc.hpp"
#include "lconv/qexp.hpp"
#include "lconv/series.hpp"

namespace converse {

/// eps = lambda/conj(lambda) if lambda != 0, mu/|mu| if lambda = 0 != mu, else 1.
/// Zero tests are relative to max(|lambda|, |mu|, 1) at 1e-12.
cplx classify_epsilon(cplx lambda, cplx mu);

/// D_q(s) = r + q - 1 - q (1 - lambda q^{-s} + mu q^{-2s}).
cplx dq_value(cplx lambda, cplx mu, cplx r, std::uint64_t q, cplx s);

struct DqReflection {
  bool pass = false;          // exact verdict when available, float verdict otherwise
  bool exact_available = false;
  bool exact_pass = false;
  double float_defect = 0;    // max defect of the three coefficient relations
};

/// Coefficient reflection A = eps conj(C)/q, B = eps conj(B), C = eps conj(A) q of
/// D_q = A + B z + C z^2, in floating point.
DqReflection verify_dq_reflection(cplx lambda, cplx mu, std::uint64_t q, double tol = 1e-12);

/// Same, decided exactly from integer Fourier coefficients f_q and f_{q^2} of a
/// weight-k form: every coefficient is a Gaussian rational times a power of sqrt(q).
DqReflection verify_dq_reflection_exact(Int128 fq, Int128 fq2, std::uint64_t q, unsigned weight);

/// Root numbers of the untwisted L-function and of the twists by characters mod q
/// (keyed by Conrey label).
struct PhaseData {
  cplx eps1{1, 0};
  std::map<std::uint64_t, cplx> eps_chi;
};

struct RamanujanFEResult {
  double residual_a = 0;  // |Lambda_{c_q+r} - D_q Lambda_1| relative to the two sides
  double residual_b = 0;  // Y-dependence of Lambda_{c_q+r} with constant eps eps1, Y0 vs 2Y0 and 4Y0
  cplx fe_constant;
  EulerFactorData euler;
};

/// Both forms of the Ramanujan-sum functional equation at the samples s.
RamanujanFEResult verify_ramanujan_fe(const CoefficientSeries& f, std::uint64_t q, cplx eps1,
                                      const std::vector<cplx>& s_samples, double precision = 1e-9,
                                      int precision_bits = 53);

/// Same with caller-supplied Euler data (lambda, mu, eps, r), e.g. deliberately
/// corrupted values for negative controls.
RamanujanFEResult verify_ramanujan_fe(const CoefficientSeries& f, std::uint64_t q, cplx eps1,
                                      const EulerFactorData& euler, const std::vector<cplx>& s_samples,
                                      double precision = 1e-9, int precision_bits = 53);

/// C_chi = conj(eps) for trivial chi, chi(-N) eps1 conj(eps_chi tau(conj chi)/tau(chi))
/// otherwise. Throws when |C_chi| - 1 exceeds tol.
cplx compute_C_chi(const DirichletCharacter& chi, cplx eps1, cplx eps_chi, std::uint64_t N,
                   cplx eps, double tol = 1e-10);

struct SqInputData {
  std::uint64_t q = 0;
  std::uint64_t N = 1;
  cplx lambda, mu, eps{1, 0}, r;
  cplx eps1{1, 0};
  std::vector<DirichletCharacter> chars;  // all characters mod q, trivial first
  std::vector<cplx> root_numbers;         // unit-normalized eps_chi per character
  double root_number_defect = 0;          // max ||eps_chi| - 1| before normalization
  std::vector<cplx> C;                    // C_chi per character
  std::vector<cplx> C_hat;                // indexed by residue a = 0..q-1
  std::vector<cplx> S;                    // indexed by x = 0..q-1
};

/// Assembles C_chi and C_hat from Euler data and root numbers. Root numbers are
/// projected onto the unit circle; the projection distance is recorded.
SqInputData build_sq_input(std::uint64_t q, std::uint64_t N, const EulerFactorData& e,
                                     const PhaseData& phases);

struct SqReport {
  double coprime_defect = 0;         // max_{(x,q)=1} |S_q(x) - 1|
  double zero_defect = 0;            // |S_q(0) - conj(eps)(r/phi(q) + 1)|
  double reconstruction_defect = 0;  // C_hat recovered from S_q by the inverse transform
  double inverse_transform_defect = 0;          // C_hat(a+1) against 1_{a=0} + (S_q(0) - 1)/q
};

/// Fills data.S and reports the identities tying S_q to C_hat.
SqReport compute_S_q(SqInputData& data);

/// Predicted n-th Fourier coefficient of f|gamma_{q,b}:
/// f_n S_q(bn) - conj(r)/phi(q) q^k 1_{q^2 | n} f_{n/q^2}.
std::vector<cplx> predicted_gamma_coefficients(const CoefficientSeries& f,
                                               const SqInputData& data, std::int64_t b);

/// Smallest n = a mod q, n <= min(B, X), with |f_n| > 1e-12 n^{(k-1)/2}.
std::optional<std::uint64_t> find_nonvanishing_residue(const CoefficientSeries& f, std::uint64_t q,
                                                       std::int64_t a, std::uint64_t B);

/// First prime p <= B where (lambda_p, mu_p) differ beyond 1e-9; mu is compared
/// only while p^2 is covered by both series.
std::optional<std::uint64_t> euler_inequivalence(const CoefficientSeries& s1,
                                                 const CoefficientSeries& s2, std::uint64_t B);

struct GammaInvarianceResult {
  IntMat2 gamma;
  double residual = 0;
};

/// An element of Gamma_0(N) with top row (q, -b) and determinant 1, chosen with
/// the smallest |c|; for b = 0 mod q the translation P^{-b}.
IntMat2 gamma_qb(std::uint64_t N, std::uint64_t q, std::int64_t b);

/// check_modularity of f|gamma_{q,b} against f with omega = 1 at balanced points.
GammaInvarianceResult verify_gamma_invariance(const CoefficientSeries& f, std::uint64_t q,
                                              std::int64_t b, double precision = kEvalPrecision);

struct LocalConsistency {
  double r_abs = 0;
  double mu_unimodularity = 0;
  bool lambda_real_nonzero = false;
  double eps_defect = 0;  // |eps - 1| when lambda is real and nonzero
};
LocalConsistency local_consistency(const EulerFactorData& e);

}  // namespace converse
