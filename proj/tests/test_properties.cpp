#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lconv/converse.hpp"
#include "lconv/error.hpp"

using namespace converse;

namespace {

class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  cplx unit() { return std::polar(1.0, real(0, 2 * std::numbers::pi)); }
  cplx gaussian() {
    std::normal_distribution<double> g;
    return {g(rng_), g(rng_)};
  }
  std::uint64_t prime_below(std::uint64_t bound) {
    static const auto primes = primes_up_to(1000);
    std::vector<std::uint64_t> ok;
    for (const auto p : primes) {
      if (p < bound) ok.push_back(p);
    }
    return ok[static_cast<std::size_t>(integer(0, static_cast<std::int64_t>(ok.size()) - 1))];
  }

private:
  std::mt19937_64 rng_;
};

// Weight-one series whose local factors are (1 - alpha_p z)(1 - beta_p z) with
// unimodular alpha_p, beta_p, extended multiplicatively.
CoefficientSeries random_hecke_series(Gen& g, std::size_t X) {
  std::vector<cplxl> a(X, 0);
  a[0] = 1;
  for (const auto p : primes_up_to(X)) {
    const cplx alpha = g.unit(), beta = g.unit();
    std::vector<cplx> local{1};
    for (std::uint64_t pj = p; pj <= X; pj *= p) {
      const std::size_t j = local.size();
      cplx s = 0;
      for (std::size_t i = 0; i <= j; ++i) {
        s += std::pow(alpha, static_cast<int>(i)) * std::pow(beta, static_cast<int>(j - i));
      }
      local.push_back(s);
      if (pj > X / p) break;
    }
    for (std::size_t m = X; m >= 1; --m) {
      if (a[m - 1] == cplxl(0) || m % p == 0) continue;
      std::uint64_t pj = p;
      for (std::size_t j = 1; j < local.size() && m * pj <= X; ++j, pj *= p) {
        const cplx v = static_cast<cplx>(a[m - 1]) * local[j];
        a[m * pj - 1] = cplxl(v.real(), v.imag());
      }
    }
  }
  return CoefficientSeries::from_raw(1, 1, a, Provenance::ExternalFile, "random-hecke", 1.0);
}

}  // namespace

TEST(Property, CharactersAreCompletelyMultiplicative) {
  Gen g(101);
  for (int trial = 0; trial < 60; ++trial) {
    const auto q = static_cast<std::uint64_t>(g.integer(1, 300));
    const auto chars = characters_mod(q);
    const auto& chi = chars[static_cast<std::size_t>(g.integer(0, static_cast<std::int64_t>(chars.size()) - 1))];
    for (int k = 0; k < 40; ++k) {
      const std::int64_t m = g.integer(-1000, 1000), n = g.integer(-1000, 1000);
      const auto em = chi.exponent(m), en = chi.exponent(n), emn = chi.exponent(m * n);
      ASSERT_EQ(emn.has_value(), em.has_value() && en.has_value()) << chi.name();
      if (emn) {
        EXPECT_EQ(*emn, (*em + *en) % chi.order()) << chi.name() << " " << m << " " << n;
      }
    }
  }
}

TEST(Property, GaussSumProductIsParityTimesModulus) {
  Gen g(202);
  for (int trial = 0; trial < 40; ++trial) {
    const auto q = std::max<std::uint64_t>(3, g.prime_below(200));
    const auto chars = characters_mod(q);
    const auto& chi = chars[static_cast<std::size_t>(g.integer(1, static_cast<std::int64_t>(chars.size()) - 1))];
    const cplx prod = gauss_sum(chi) * gauss_sum(chi.conj());
    EXPECT_LT(std::abs(prod - static_cast<double>(chi.parity() * static_cast<std::int64_t>(q))), 1e-10 * static_cast<double>(q))
        << chi.name();
  }
}

TEST(Property, RamanujanSumMultiplicativeInModulus) {
  Gen g(303);
  for (int trial = 0; trial < 200; ++trial) {
    const auto q1 = static_cast<std::uint64_t>(g.integer(1, 60));
    const auto q2 = static_cast<std::uint64_t>(g.integer(1, 60));
    if (gcd_u64(q1, q2) != 1) continue;
    const std::int64_t n = g.integer(-500, 500);
    EXPECT_EQ(ramanujan_sum(q1 * q2, n), ramanujan_sum(q1, n) * ramanujan_sum(q2, n)) << q1 << " " << q2 << " " << n;
  }
}

TEST(Property, NormalizeRoundTrip) {
  Gen g(404);
  for (int trial = 0; trial < 500; ++trial) {
    const cplx f = g.gaussian() * 1e6;
    const auto n = static_cast<std::uint64_t>(g.integer(1, 100000));
    const auto k = static_cast<unsigned>(g.integer(1, 24));
    const cplx back = denormalize(normalize(f, n, k), n, k);
    EXPECT_LT(std::abs(back - f), 1e-12 * std::abs(f)) << n << " " << k;
  }
}

TEST(Property, TwistIdentityHoldsForArbitrarySequences) {
  Gen g(505);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t X = 2000;
    std::vector<cplxl> raw(X);
    for (auto& v : raw) {
      const cplx c = g.gaussian();
      v = {c.real(), c.imag()};
    }
    const auto k = static_cast<unsigned>(g.integer(1, 12));
    const auto s = CoefficientSeries::from_raw(1, k, raw, Provenance::ExternalFile, "noise", 1.0);
    const auto q = g.prime_below(40);
    const cplx sigma(g.real(2, 3), g.real(-2, 2));
    const auto r = verify_twist_identity(s, q, sigma);
    EXPECT_LT(r.coefficientwise_defect, 1e-12) << "q=" << q << " k=" << k;
  }
}

TEST(Property, HeckeSeriesHaveDegreeTwoEulerFactors) {
  Gen g(606);
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = random_hecke_series(g, 5000);
    for (const std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 13ULL, 31ULL, 67ULL}) {
      const unsigned J = supported_degree(s, q, 6);
      const auto e = euler_factor_inverse(s, q, J);
      EXPECT_LT(e.defect, 1e-9) << "q=" << q << " J=" << J;
      EXPECT_TRUE(e.roots_ok) << "q=" << q;
      EXPECT_LT(std::abs(std::abs(e.mu) - 1), 1e-12);
      EXPECT_TRUE(verify_dq_reflection(e.lambda, e.mu, q).pass);
    }
  }
}

TEST(Property, DqReflectionOnUnimodularConsistentData) {
  Gen g(707);
  for (int trial = 0; trial < 300; ++trial) {
    // lambda = conj(lambda) eps for a unit eps, |mu| = 1, so r = 1 - eps conj(mu) is whatever it is.
    const cplx eps = g.unit();
    const cplx lambda = std::sqrt(eps) * g.real(-3, 3);
    const cplx mu = g.unit();
    const auto q = g.prime_below(100);
    const auto r = verify_dq_reflection(lambda, mu, q);
    EXPECT_TRUE(r.pass) << lambda << " " << mu;
    EXPECT_LT(r.float_defect, 1e-12 * std::max(1.0, static_cast<double>(q) * std::abs(lambda)));
  }
}

TEST(Property, FourierTransformPairReconstructs) {
  Gen g(808);
  for (int trial = 0; trial < 20; ++trial) {
    const auto q = g.prime_below(30);
    EulerFactorData e;
    e.q = q;
    e.lambda = g.gaussian();
    e.mu = g.unit();
    e.epsilon = classify_epsilon(e.lambda, e.mu);
    e.r = 1.0 - e.epsilon * std::conj(e.mu);
    PhaseData p;
    p.eps1 = g.unit();
    for (const auto& chi : characters_mod(q)) {
      if (!chi.is_trivial()) p.eps_chi[chi.label()] = g.unit();
    }
    auto data = build_sq_input(q, 1, e, p);
    const auto rep = compute_S_q(data);
    EXPECT_LT(rep.reconstruction_defect, 1e-10) << q;
  }
}

TEST(Property, YIndependenceAtRandomPointsForDelta) {
  Gen g(909);
  const auto f = eta_product_coeffs({{1, 24}}, 12, 1, 4000);
  const auto ctx = make_context(f, 1);
  const double Y0 = ctx.default_split();
  for (int trial = 0; trial < 20; ++trial) {
    const cplx s(g.real(0, 1.5), g.real(-6, 6));
    const double Y1 = Y0 * g.real(0.5, 1), Y2 = Y0 * g.real(1, 2);
    const auto yi = y_independence(f, s, 1.0, Y1, Y2, ctx);
    EXPECT_LT(yi.relative, 1e-8) << s << " " << Y1 << " " << Y2;
  }
}

TEST(Property, ModularityAtRandomSL2Elements) {
  Gen g(1010);
  const auto f = eta_product_coeffs({{1, 24}}, 12, 1, 4000);
  int tested = 0;
  for (int trial = 0; trial < 200 && tested < 15; ++trial) {
    const std::int64_t a = g.integer(-6, 6), c = g.integer(1, 6);
    if (gcd_u64(static_cast<std::uint64_t>(std::abs(a)), static_cast<std::uint64_t>(c)) != 1) continue;
    // Solve a d - b c = 1.
    std::int64_t d = 0;
    while ((a * d - 1) % c != 0) ++d;
    const IntMat2 m{a, (a * d - 1) / c, c, d};
    ASSERT_EQ(m.det(), 1);
    EXPECT_LT(check_modularity(f, m, 1.0, balanced_points(m), false), 1e-8) << m.str();
    ++tested;
  }
  EXPECT_GE(tested, 10);
}
