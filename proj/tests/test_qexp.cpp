#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lconv/error.hpp"
#include "lconv/qexp.hpp"
#include "lconv/series.hpp"

using namespace converse;

namespace {

const CoefficientSeries& delta() {
  static const auto s = eta_product_coeffs({{1, 24}}, 12, 1, 2000);
  return s;
}

const CoefficientSeries& level11() {
  static const auto s = eta_product_coeffs({{1, 2}, {11, 2}}, 2, 11, 40000);
  return s;
}

const CoefficientSeries& eis15() {
  static const auto s = eisenstein_coeffs(DirichletCharacter(5, 4), DirichletCharacter(3, 2), 10000);
  return s;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(EvalForm, DeltaAtTenIIsOneTerm) {
  const auto r = eval_form(delta(), UpperHalfPoint(0, 10), false);
  const double single = static_cast<double>(std::exp(-20 * std::numbers::pi_v<long double>));
  EXPECT_LT(rel(r.value, cplx(single, 0)), 1e-20);
}

TEST(EvalForm, PeriodicUnderIntegerShift) {
  for (const auto* s : {&delta(), &level11(), &eis15()}) {
    for (double x : {0.0, 0.137, -0.42}) {
      const auto a = eval_form(*s, UpperHalfPoint(x, 0.3), false);
      const auto b = eval_form(*s, UpperHalfPoint(x + 1, 0.3), false);
      EXPECT_LT(std::abs(a.value - b.value), 1e-14 * a.magnitude) << s->descriptor() << " " << x;
    }
  }
}

TEST(EvalForm, DoublingTruncationStaysWithinTailBound) {
  const auto full = eta_product_coeffs({{1, 24}}, 12, 1, 40);
  const auto half = full.truncated(20);
  const UpperHalfPoint z(0.1, 0.2);
  const auto a = eval_form(half, z, false, 1.0);
  const auto b = eval_form(full, z, false, 1.0);
  EXPECT_LE(std::abs(a.value - b.value), a.tail_bound);
  EXPECT_LE(b.tail_bound, a.tail_bound);
}

TEST(EvalForm, ConjugatedUsesConjugateCoefficients) {
  const UpperHalfPoint z(0.2, 0.25);
  const auto a = eval_form(eis15(), z, true);
  // conj(sum conj(f_n) e(nz)) = sum f_n e(-n conj z) = f evaluated at -conj(z).
  const auto b = eval_form(eis15(), UpperHalfPoint(-0.2, 0.25), false);
  EXPECT_LT(rel(std::conj(a.value), b.value), 1e-12);
}

TEST(EvalForm, SmallImaginaryPartReportsMinimalTruncation) {
  try {
    eval_form(delta(), UpperHalfPoint(0, 1e-4), false);
    FAIL() << "expected InsufficientTruncation";
  } catch (const InsufficientTruncation& e) {
    EXPECT_NE(std::string(e.what()).find("need X >="), std::string::npos);
  }
}

TEST(TailBound, MonotoneInTruncation) {
  for (unsigned k : {1U, 2U, 12U}) {
    for (double y : {0.01, 0.1, 1.0}) {
      double prev = std::numeric_limits<double>::infinity();
      for (std::size_t X = 1; X <= 100000; X = X * 3 / 2 + 1) {
        const double t = qexp_tail_bound(1.0, k, y, X);
        EXPECT_LE(t, prev) << k << " " << y << " " << X;
        prev = t;
      }
    }
  }
}

TEST(Slash, IdentityTranslationAndPositiveScalar) {
  const UpperHalfPoint z(0.05, 0.9);
  for (const auto* s : {&delta(), &level11(), &eis15()}) {
    const auto base = eval_form(*s, z, false).value;
    EXPECT_LT(rel(slash_eval(*s, IntMat2::identity(), z, false).value, base), 1e-14);
    EXPECT_LT(rel(slash_eval(*s, IntMat2::translation(1), z, false).value, base), 1e-12);
    EXPECT_LT(rel(slash_eval(*s, Mat2(2, 0, 0, 2), z, false).value, base), 1e-14);
  }
}

TEST(Slash, NegativeScalarActsBySignOfWeight) {
  const UpperHalfPoint z(0.05, 0.9);
  const auto [m, sign] = normalize_sign(Mat2(-1, 0, 0, -1), 1);
  EXPECT_EQ(sign, -1);
  EXPECT_EQ(m.a, 1);
  EXPECT_LT(rel(slash_eval(eis15(), Mat2(-1, 0, 0, -1), z, false).value, -eval_form(eis15(), z, false).value),
            1e-14);
  EXPECT_LT(rel(slash_eval(delta(), Mat2(-1, 0, 0, -1), z, false).value, eval_form(delta(), z, false).value),
            1e-14);
}

TEST(Slash, ActionOnPoints) {
  const auto w = act(IntMat2::fricke(1), UpperHalfPoint(0, 2));
  EXPECT_NEAR(w.x(), 0, 1e-15);
  EXPECT_NEAR(w.y(), 0.5, 1e-15);
  EXPECT_THROW(UpperHalfPoint(0.3, 0.0), InvalidArgument);
  EXPECT_THROW(UpperHalfPoint(0.3, -1.0), InvalidArgument);
}

TEST(MatrixIdentity, WorkedExamples) {
  EXPECT_EQ(IntMat2::fricke(1) * IntMat2::translation(4) * IntMat2::fricke(1), (IntMat2{-1, 0, 4, -1}));
  EXPECT_EQ(IntMat2::fricke(11) * IntMat2::translation(2) * IntMat2::fricke(11), (IntMat2{-11, 0, 242, -11}));
  EXPECT_EQ(IntMat2::fricke(15) * IntMat2::fricke(15), (IntMat2{-15, 0, 0, -15}));
  EXPECT_TRUE(check_matrix_identity(1, 4).ok());
  EXPECT_TRUE(check_matrix_identity(11, 2).ok());
  EXPECT_TRUE(check_matrix_identity(7, 0).ok());
}

TEST(MatrixIdentity, AllSmallLevelsAndShifts) {
  for (std::int64_t N = 1; N <= 30; ++N) {
    for (std::int64_t M = -10; M <= 10; ++M) {
      const auto r = check_matrix_identity(N, M);
      EXPECT_TRUE(r.ok()) << N << " " << M;
    }
  }
}

TEST(PhaseEstimate, DeltaIsFrickeInvariant) {
  const std::vector<UpperHalfPoint> pts{{0, 1}, {0.1, 1.1}, {-0.2, 0.95}, {0.3, 0.9}};
  const auto pe = estimate_phase(delta(), IntMat2::fricke(1), pts, false);
  EXPECT_LT(std::abs(pe.omega - cplx(1, 0)), 1e-9);
  EXPECT_LT(pe.unimodularity_defect, 1e-9);
  EXPECT_LT(pe.spread, 1e-9);
}

TEST(PhaseEstimate, IdentityGivesExactlyOne) {
  const std::vector<UpperHalfPoint> pts{{0, 0.5}, {0.2, 0.7}};
  const auto pe = estimate_phase(level11(), IntMat2::identity(), pts, false);
  EXPECT_EQ(pe.omega, cplx(1, 0));
  EXPECT_EQ(pe.spread, 0.0);
}

TEST(PhaseEstimate, CorruptedCoefficientIsDetected) {
  const auto bad = delta().perturbed(2, {0.01, 0});
  const std::vector<UpperHalfPoint> pts{{0, 1}, {0.1, 1.1}, {-0.2, 0.95}, {0.3, 0.9}};
  const auto pe = estimate_phase(bad, IntMat2::fricke(1), pts, false);
  EXPECT_GT(pe.spread, 1e-4);
}

TEST(PhaseEstimate, NeedsTwoPoints) {
  EXPECT_THROW(estimate_phase(delta(), IntMat2::fricke(1), {UpperHalfPoint(0, 1)}, false), InvalidArgument);
}

TEST(PhaseEstimate, LevelElevenFrickeSign) {
  const auto pts = involution_points(11, 1);
  const auto pe = estimate_phase(level11(), IntMat2::fricke(11), pts, true);
  EXPECT_LT(pe.unimodularity_defect, 1e-9);
  EXPECT_LT(pe.spread, 1e-9);
  // Real coefficients and an eigenform of H_11, so omega is +-1.
  EXPECT_LT(std::abs(pe.omega.imag()), 1e-9);
  EXPECT_LT(std::abs(std::abs(pe.omega.real()) - 1), 1e-9);
}

TEST(Modularity, TopRowMatrixForDelta) {
  const IntMat2 g{5, -1, -4, 1};
  const auto pts = balanced_points(g);
  const auto pe = estimate_phase(delta(), g, pts, false);
  EXPECT_LT(check_modularity(delta(), g, pe.omega, pts, false), 1e-8);
  EXPECT_LT(std::abs(pe.omega - cplx(1, 0)), 1e-8);
}

TEST(Modularity, TranslationWithUnitPhase) {
  const std::vector<UpperHalfPoint> pts{{0, 0.3}, {0.25, 0.4}, {-0.4, 0.35}};
  EXPECT_LT(check_modularity(level11(), IntMat2::translation(1), 1.0, pts, false), 1e-12);
}

TEST(Modularity, TinyImageImaginaryPartIsInsufficient) {
  const std::vector<UpperHalfPoint> pts{{0, 5e-4}, {0.1, 5e-4}};
  EXPECT_THROW(check_modularity(delta(), IntMat2::identity(), 1.0, pts, false), InsufficientTruncation);
}

TEST(Modularity, DependsOnlyOnTopRow) {
  // Two completions of the top row (23, -1) inside Gamma_0(11).
  const IntMat2 g1{23, -1, -22, 1};
  const IntMat2 g2{23, -1, 231, -10};
  ASSERT_EQ(g1.det(), 1);
  ASSERT_EQ(g2.det(), 1);
  EXPECT_LT(check_modularity(level11(), g1, 1.0, balanced_points(g1), false), 1e-8);
  const auto pts = balanced_points(g1);
  for (const auto& z : pts) {
    const auto a = slash_eval(level11(), g1, z, false, 1e-10);
    const auto b = slash_eval(level11(), g2, z, false, 1e-10);
    EXPECT_LT(rel(a.value, b.value), 1e-8) << z.z();
  }
}

TEST(Slash, CocycleOnRandomMatrices) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> entry(-3, 3);
  std::uniform_real_distribution<double> xs(-0.5, 0.5), ys(0.6, 1.2);
  int tested = 0;
  for (int trial = 0; trial < 400 && tested < 25; ++trial) {
    const IntMat2 g1{entry(rng), entry(rng), entry(rng), entry(rng)};
    const IntMat2 g2{entry(rng), entry(rng), entry(rng), entry(rng)};
    if (g1.det() <= 0 || g2.det() <= 0) continue;
    const UpperHalfPoint z(xs(rng), ys(rng));
    const auto w = act(g2, z);
    if (w.y() < 0.05 || act(g1, w).y() < 0.05) continue;
    for (const auto* s : {&delta(), &eis15()}) {
      const auto k = static_cast<int>(s->weight());
      const cplx j2 = std::pow(static_cast<double>(g2.det()), k / 2.0) *
                      std::pow(cplx(static_cast<double>(g2.c)) * z.z() + static_cast<double>(g2.d), -k);
      const cplx lhs = slash_eval(*s, g1 * g2, z, false, 1e-10).value;
      const cplx rhs = slash_eval(*s, g1, w, false, 1e-10).value * j2;
      if (k % 2 == 0) {
        EXPECT_LT(rel(lhs, rhs), 1e-9) << g1.str() << " " << g2.str();
      } else {
        EXPECT_LT(std::min(rel(lhs, rhs), rel(lhs, -rhs)), 1e-9) << g1.str() << " " << g2.str();
      }
    }
    ++tested;
  }
  EXPECT_GE(tested, 10);
}

TEST(TwistedCoeffs, RamanujanWeightExamples) {
  const auto t = twisted_coeffs(delta(), TwistSpec::ramanujan(5, 0));
  EXPECT_EQ(t.level(), 25U);
  EXPECT_EQ(t.length(), delta().length());
  EXPECT_LT(std::abs(t.raw(5) - 4.0L * delta().raw(5)), 1e-6L * std::abs(delta().raw(5)));
  for (std::size_t n : {1U, 2U, 3U, 4U, 6U, 7U, 11U}) {
    EXPECT_EQ(t.raw(n), -delta().raw(n)) << n;
  }
  const auto tr = twisted_coeffs(delta(), TwistSpec::ramanujan(5, {2, 0}));
  EXPECT_EQ(tr.raw(3), delta().raw(3));
}

TEST(TwistedCoeffs, CharacterVanishesOnMultiplesOfQ) {
  const auto chi = DirichletCharacter(5, 2);
  const auto t = twisted_coeffs(delta(), TwistSpec::character(chi));
  for (std::size_t n = 5; n <= 100; n += 5) EXPECT_EQ(std::abs(t.raw(n)), 0.0L) << n;
  const cplx tau = gauss_sum(chi.conj());
  const cplx expect = static_cast<cplx>(delta().raw(2)) * tau * chi(2);
  EXPECT_LT(std::abs(static_cast<cplx>(t.raw(2)) - expect), 1e-12 * std::abs(expect));
}

TEST(TwistedCoeffs, RejectsModulusDividingLevel) {
  EXPECT_THROW(twisted_coeffs(level11(), TwistSpec::ramanujan(11, 0)), InvalidArgument);
  EXPECT_THROW(twisted_coeffs(level11(), TwistSpec::character(DirichletCharacter(11, 2))), InvalidArgument);
}

TEST(TwistedCoeffs, CongruenceCanBeWaived) {
  const auto chi = DirichletCharacter(7, 3);
  EXPECT_THROW(twisted_coeffs(level11(), TwistSpec::character(chi)), InvalidArgument);
  const auto t = twisted_coeffs(level11(), TwistSpec::character(chi), {false, false});
  EXPECT_EQ(t.level(), 11U * 49U);
  EXPECT_LT(std::abs(static_cast<cplx>(t.raw(3)) - static_cast<cplx>(level11().raw(3)) * chi(3)), 1e-15);
}
