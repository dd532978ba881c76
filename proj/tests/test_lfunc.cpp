#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lconv/error.hpp"
#include "lconv/incgamma.hpp"
#include "lconv/lfunc.hpp"
#include "lconv/series.hpp"

using namespace converse;

namespace {

const CoefficientSeries& delta() {
  static const auto s = eta_product_coeffs({{1, 24}}, 12, 1, 10000);
  return s;
}

const CoefficientSeries& level11() {
  static const auto s = eta_product_coeffs({{1, 2}, {11, 2}}, 2, 11, 10000);
  return s;
}

const CoefficientSeries& eis15() {
  static const auto s = eisenstein_coeffs(DirichletCharacter(5, 4), DirichletCharacter(3, 2), 10000);
  return s;
}

CoefficientSeries conjugate_series(const CoefficientSeries& b) {
  std::vector<cplxl> raw(b.length());
  for (std::size_t n = 1; n <= b.length(); ++n) raw[n - 1] = std::conj(b.raw(n));
  return CoefficientSeries::from_raw(b.level(), b.weight(), raw, Provenance::Twist, b.descriptor() + "-bar",
                                     b.growth_constant());
}

cplx root_number(const CoefficientSeries& b, std::uint64_t q) {
  return estimate_root_number(b, make_context(b, q), default_root_number_samples()).epsilon;
}

}  // namespace

TEST(CompletedL, DeltaIsRealOnTheRealAxis) {
  const auto ctx = make_context(delta(), 1);
  for (double s : {0.2, 0.5, 0.8, 1.7, 3.0}) {
    const auto r = lambda_completed(delta(), cplx(s, 0), ctx, cplx(1, 0));
    EXPECT_LT(std::abs(r.value.imag()), 1e-9 * std::abs(r.value)) << s;
  }
}

TEST(CompletedL, ConjugationSymmetry) {
  const auto b = twist_for_lfunction(delta(), TwistSpec::character(DirichletCharacter(5, 2)));
  const auto bb = conjugate_series(b);
  const auto ctx = make_context(b, 5);
  const cplx eps = root_number(b, 5);
  for (const cplx s : {cplx(0.5, 0), cplx(0.5, 1), cplx(0.75, -2)}) {
    const auto v = lambda_completed(b, s, ctx, eps);
    const auto w = lambda_completed(bb, std::conj(s), ctx, std::conj(eps));
    EXPECT_LT(std::abs(w.value - std::conj(v.value)), 1e-9 * v.magnitude) << s;
  }
}

TEST(CompletedL, QuadraticTwistOfDeltaStableUnderDoubling) {
  const auto b = twist_for_lfunction(delta(), TwistSpec::character(DirichletCharacter(5, 4)));
  const auto ctx = make_context(b, 5);
  const cplx eps = root_number(b, 5);
  const auto full = lambda_completed(b.truncated(4000), cplx(0.5, 0), ctx, eps);
  const auto half = lambda_completed(b.truncated(2000), cplx(0.5, 0), ctx, eps);
  EXPECT_LT(std::abs(full.value - half.value), 1e-9 * full.magnitude);
}

TEST(CompletedL, SplitSumsMatchTheirDefinition) {
  // Upper sum for a series with a single nonzero coefficient.
  std::vector<cplxl> raw(10, 0);
  raw[2] = 1;  // f_3
  const auto b = CoefficientSeries::from_raw(1, 12, raw, Provenance::ExternalFile, "e3", 1.0);
  const auto ctx = make_context(b, 1);
  const cplx s(0.7, 0.4);
  const double Y = 0.9;
  const auto r = split_sums(b, s, Y, ctx);
  const cplx sp = s + 5.5;
  const double x = 2 * std::numbers::pi * 3;
  const cplx want = 2.0 * std::pow(cplx(x), -sp) * upper_incomplete_gamma(sp, x * Y);
  EXPECT_LT(std::abs(r.upper - want), 1e-13 * std::abs(want)) << r.upper << " " << want;
}

TEST(CompletedL, YIndependenceAcrossFormsAndTwists) {
  struct Case {
    const CoefficientSeries* f;
    std::uint64_t q;
  };
  for (const Case c : {Case{&delta(), 1}, Case{&delta(), 5}, Case{&delta(), 7}, Case{&level11(), 1},
                       Case{&level11(), 5}, Case{&eis15(), 1}, Case{&eis15(), 7}}) {
    for (const auto& chi : characters_mod(c.q)) {
      if (c.q > 1 && !chi.is_primitive()) continue;
      const auto twist = c.q == 1 ? TwistSpec::untwisted() : TwistSpec::character(chi);
      const auto b = twist_for_lfunction(*c.f, twist);
      const auto ctx = make_context(b, c.q);
      const auto est = estimate_root_number(b, ctx, default_root_number_samples());
      EXPECT_LT(est.spread, 1e-7) << b.descriptor();
      EXPECT_LT(est.unimodularity_defect, 1e-8) << b.descriptor();
      const double Y0 = ctx.default_split();
      for (const cplx s : {cplx(0.5, 0), cplx(0.5, 1), cplx(0.75, 0), cplx(2, 0)}) {
        const auto yi = y_independence(b, s, est.epsilon, Y0, 2 * Y0, ctx);
        EXPECT_LT(yi.relative, 1e-8) << b.descriptor() << " s=" << s;
      }
    }
  }
}

TEST(RootNumber, DeltaUntwistedIsOne) {
  const auto est = estimate_root_number(delta(), make_context(delta(), 1), default_root_number_samples());
  EXPECT_LT(std::abs(est.epsilon - cplx(1, 0)), 1e-8);
  EXPECT_FALSE(est.violated);
}

TEST(RootNumber, LevelElevenIsASign) {
  const auto est = estimate_root_number(level11(), make_context(level11(), 1), default_root_number_samples());
  EXPECT_LT(std::abs(std::abs(est.epsilon.real()) - 1), 1e-8);
  EXPECT_LT(std::abs(est.epsilon.imag()), 1e-8);
}

TEST(RootNumber, ConjugateCharacterGivesConjugateRootNumber) {
  for (const std::uint64_t q : {5ULL, 7ULL}) {
    for (const auto& chi : characters_mod(q)) {
      if (chi.is_trivial()) continue;
      const auto b1 = twist_for_lfunction(delta(), TwistSpec::character(chi));
      const auto b2 = twist_for_lfunction(delta(), TwistSpec::character(chi.conj()));
      const auto e1 = estimate_root_number(b1, make_context(b1, q), default_root_number_samples());
      const auto e2 = estimate_root_number(b2, make_context(b2, q), default_root_number_samples());
      EXPECT_LT(std::abs(e1.epsilon - std::conj(e2.epsilon)), 2 * (e1.spread + e2.spread) + 1e-8) << chi.name();
    }
  }
}

TEST(RootNumber, CorruptedCoefficientSpreads) {
  const auto bad = delta().perturbed(3, {0.1, 0});
  const auto b = twist_for_lfunction(bad, TwistSpec::character(characters_mod(7)[1]));
  const auto est = estimate_root_number(b, make_context(b, 7), default_root_number_samples());
  EXPECT_GT(est.spread, 1e-3);
  const auto untwisted = estimate_root_number(bad, make_context(bad, 1), default_root_number_samples());
  EXPECT_GT(untwisted.spread, 1e-5);
}

TEST(RootNumber, SampleValidation) {
  const auto ctx = make_context(delta(), 1);
  EXPECT_THROW(estimate_root_number(delta(), ctx, {cplx(0.5, 0), cplx(1, 0)}), InvalidArgument);
  EXPECT_THROW(estimate_root_number(delta(), ctx, {cplx(0.5, 0), cplx(0.5, 1), cplx(1, 0)}), InvalidArgument);
  EXPECT_THROW(estimate_root_number(delta(), ctx, {cplx(0.5, 0), cplx(1, 0), cplx(2, 0)}), InvalidArgument);
}

TEST(AdditiveTwist, ZeroResidueIsTheLSeries) {
  const cplx s(4, 1);
  const auto f0 = additive_twist_value(delta(), 0, 5, s);
  CompensatedSum<cplx> acc;
  for (std::size_t n = 1; n <= delta().length(); ++n) {
    acc.add(delta().a(n) * std::pow(static_cast<double>(n), -s));
  }
  EXPECT_LT(std::abs(f0.value - acc.value()), 1e-13);
  const auto fq = additive_twist_value(delta(), 5, 5, s);
  EXPECT_LT(std::abs(fq.value - f0.value), 1e-15);
  const auto fneg = additive_twist_value(delta(), -4, 5, s);
  const auto f1 = additive_twist_value(delta(), 1, 5, s);
  EXPECT_LT(std::abs(fneg.value - f1.value), 1e-15);
}

TEST(AdditiveTwist, TruncationWithinReportedTail) {
  const auto big = eta_product_coeffs({{1, 24}}, 12, 1, 200000);
  const cplx s(2, 0);
  const auto small_val = additive_twist_value(big.truncated(10000), 1, 5, s, 1.0);
  const auto big_val = additive_twist_value(big, 1, 5, s, 1.0);
  EXPECT_LE(std::abs(small_val.value - big_val.value), small_val.tail_bound);
  // Direct oracle: e(n/5) from the angle, no residue reduction.
  CompensatedSum<cplx> acc;
  for (std::size_t n = 1; n <= big.length(); ++n) {
    const double angle = 2 * std::numbers::pi * static_cast<double>(n % 5) / 5.0;
    acc.add(big.a(n) * std::polar(1.0, angle) / (static_cast<double>(n) * static_cast<double>(n)));
  }
  EXPECT_LT(std::abs(acc.value() - big_val.value), 1e-12);
}

TEST(AdditiveTwist, RejectsSmallRealPartNamingTheBound) {
  try {
    additive_twist_value(delta(), 1, 5, cplx(2, 0));
    FAIL() << "expected rejection";
  } catch (const InvalidArgument& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("minimal admissible Re(s)"), std::string::npos) << msg;
  }
  EXPECT_EQ(dirichlet_tail_bound(1.0, 1.5, 100), std::numeric_limits<double>::infinity());
}

TEST(TwistIdentity, DeltaAtTwo) {
  const auto r = verify_twist_identity(delta(), 5, cplx(2, 0));
  EXPECT_LT(r.numeric_residual, 1e-10);
  EXPECT_LT(r.coefficientwise_defect, 1e-12);
  const auto r2 = verify_twist_identity(delta(), 7, cplx(2, 1));
  EXPECT_LT(r2.numeric_residual, 1e-10);
  EXPECT_LT(r2.coefficientwise_defect, 1e-12);
}

TEST(TwistIdentity, HoldsForPerturbedSequence) {
  const auto bad = delta().perturbed(7, {0.01, 0});
  const auto r = verify_twist_identity(bad, 5, cplx(2, 0));
  EXPECT_LT(r.coefficientwise_defect, 1e-12);
}

TEST(TwistIdentity, Preconditions) {
  EXPECT_THROW(verify_twist_identity(delta(), 5, cplx(1.2, 0)), InvalidArgument);
  EXPECT_THROW(verify_twist_identity(level11(), 11, cplx(2, 0)), InvalidArgument);
}
