#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "lconv/error.hpp"
#include "lconv/suite.hpp"

using namespace converse;

TEST(Config, ParsesKeysCommentsAndDashes) {
  const auto cfg = parse_config_text(
      "# comment\n"
      "form = 11a\n"
      "primes = 23, 5\n"
      "checks = fe,euler   # trailing comment\n"
      "tolerance = 1e-6\n"
      "truncation = 2000\n"
      "precision_bits = 64\n"
      "perturb = a2=+0.01\n"
      "threads = 3\n"
      "euler-prime-bound = 31\n"
      "inject-root-number = 5.2=1;1=-1\n");
  EXPECT_EQ(cfg.form, "11a");
  EXPECT_EQ(cfg.primes, (std::vector<std::uint64_t>{23, 5}));
  EXPECT_EQ(cfg.checks, (std::vector<std::string>{"fe", "euler"}));
  ASSERT_TRUE(cfg.tolerance.has_value());
  EXPECT_DOUBLE_EQ(*cfg.tolerance, 1e-6);
  EXPECT_EQ(cfg.truncation, 2000U);
  EXPECT_EQ(cfg.precision_bits, 64);
  ASSERT_EQ(cfg.perturb.size(), 1U);
  EXPECT_EQ(cfg.perturb[0].n, 2U);
  EXPECT_EQ(cfg.threads, 3U);
  EXPECT_EQ(cfg.euler_prime_bound, 31U);
  ASSERT_EQ(cfg.inject_root_numbers.size(), 2U);
  EXPECT_EQ(cfg.inject_root_numbers[0].first, "5.2");
  EXPECT_EQ(cfg.inject_root_numbers[1].second, cplx(-1, 0));
}

TEST(Config, LaterLinesWin) {
  // The CLI appends its flags after the file, so this is the precedence rule.
  const auto cfg = parse_config_text("form = 11a\nprimes = 23\nform = delta\n");
  EXPECT_EQ(cfg.form, "delta");
  EXPECT_EQ(cfg.primes, (std::vector<std::uint64_t>{23}));
  SuiteConfig base;
  base.form = "11a";
  EXPECT_EQ(parse_config_text("primes = 7\n", base).form, "11a");
}

TEST(Config, ChecksAllMeansEverything) {
  EXPECT_TRUE(parse_config_text("checks = all\n").checks.empty());
}

TEST(Config, ErrorsCarryLineNumbers) {
  try {
    parse_config_text("form = delta\n\nbogus = 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_config_text("primes = 5,x\n"), ParseError);
  EXPECT_THROW(parse_config_text("no equals sign\n"), ParseError);
  EXPECT_THROW(parse_config_text("precision-bits = 128\n"), Error);
  EXPECT_THROW(parse_config_text("primes = 4\n"), Error);
}

TEST(Perturbation, RealAndImaginaryShifts) {
  const auto p = parse_perturbation("a2=+0.01");
  EXPECT_EQ(p.n, 2U);
  EXPECT_EQ(p.delta, cplx(0.01, 0));
  EXPECT_EQ(parse_perturbation("a7=-0.5").delta, cplx(-0.5, 0));
  EXPECT_EQ(parse_perturbation("a3=0.01i").delta, cplx(0, 0.01));
  EXPECT_EQ(parse_perturbation("a3=1+2i").delta, cplx(1, 2));
  EXPECT_THROW(parse_perturbation("b2=1"), ParseError);
  EXPECT_THROW(parse_perturbation("a0=1"), ParseError);
  EXPECT_THROW(parse_perturbation("a2=abc"), ParseError);
}

TEST(Forms, BundledEntriesRoundTrip) {
  const auto forms = bundled_forms();
  ASSERT_GE(forms.size(), 3U);
  for (const auto& f : forms) {
    const auto cfg = parse_config_text("form = " + f.descriptor + "\n");
    EXPECT_EQ(cfg.form, f.descriptor);
    const auto s = build_form(cfg.form, 200);
    EXPECT_EQ(s.level(), f.level) << f.descriptor;
    EXPECT_EQ(s.weight(), f.weight) << f.descriptor;
    EXPECT_EQ(s.length(), 200U);
  }
  const auto doc = nlohmann::json::parse(forms_to_json(forms));
  EXPECT_EQ(doc["forms"].size(), forms.size());
}

TEST(Forms, DescriptorGrammar) {
  const auto eta = build_form("eta:1^2,11^2:k=2:N=11", 100);
  const auto ref = build_form("11a", 100);
  for (std::size_t n = 1; n <= 100; ++n) EXPECT_EQ(eta.raw(n), ref.raw(n));
  EXPECT_THROW(build_form("nonsense"), ParseError);
  EXPECT_THROW(build_form("eis:5.4"), ParseError);
  EXPECT_THROW(build_form("file:/nonexistent/coeffs.csv"), Error);
}

TEST(Forms, FileInputCarriesWarnings) {
  const std::string path = ::testing::TempDir() + "/lconv_suite_form.csv";
  {
    std::ofstream out(path);
    out << "# N=1 k=12\n";
    const auto d = build_form("delta", 30);
    for (std::size_t n = 1; n <= 30; ++n) {
      const long double v = n == 6 ? d.raw(n).real() + 1 : d.raw(n).real();
      out << n << "," << static_cast<long long>(v) << ",0\n";
    }
  }
  std::vector<std::string> warnings;
  const auto s = build_form("file:" + path, 0, &warnings);
  EXPECT_EQ(s.length(), 30U);
  EXPECT_FALSE(warnings.empty());
}

TEST(Coverage, EveryOperationIsReachableFromACheckName) {
  const std::vector<std::string> ops = {
      "characters_mod", "gauss_sum", "ramanujan_sum", "verify_additive_fourier_identity",
      "eta_product_coeffs", "eisenstein_coeffs", "load_coeffs", "euler_factor_inverse",
      "check_multiplicativity", "eval_form", "slash_eval", "check_matrix_identity", "estimate_phase",
      "check_modularity", "twisted_coeffs", "upper_incomplete_gamma", "lambda_completed",
      "additive_twist_value", "verify_twist_identity", "estimate_root_number", "classify_epsilon",
      "verify_dq_reflection", "verify_ramanujan_fe", "compute_C_chi", "compute_S_q",
      "find_nonvanishing_residue", "euler_inequivalence", "verify_gamma_invariance"};
  std::set<std::string> covered;
  const auto& names = all_check_names();
  for (const auto& [check, list] : check_coverage()) {
    EXPECT_NE(std::find(names.begin(), names.end(), check), names.end()) << check;
    covered.insert(list.begin(), list.end());
  }
  for (const auto& op : ops) EXPECT_TRUE(covered.count(op)) << op;
  EXPECT_EQ(check_coverage().size(), names.size());
}

TEST(Suite, UnknownCheckThrows) {
  SuiteConfig cfg;
  cfg.checks = {"fe", "no-such-check"};
  EXPECT_THROW(run_suite(cfg), InvalidArgument);
}

namespace {

SuiteConfig quick_config(unsigned threads) {
  SuiteConfig cfg;
  cfg.form = "delta";
  cfg.primes = {5, 7};
  cfg.checks = {"fourier", "matrix", "euler", "twist-identity", "fe", "dq", "sq", "gamma", "residue-coverage"};
  cfg.euler_prime_bound = 13;
  cfg.threads = threads;
  return cfg;
}

}  // namespace

TEST(Suite, DeterministicAcrossRunsAndThreadCounts) {
  const auto a = report_to_json(run_suite(quick_config(1)), false);
  const auto b = report_to_json(run_suite(quick_config(4)), false);
  const auto c = report_to_json(run_suite(quick_config(4)), false);
  EXPECT_EQ(a, b);
  EXPECT_EQ(b, c);
}

TEST(Suite, SummaryMatchesRecordsAndAnchorsArePresent) {
  const auto rep = run_suite(quick_config(0));
  EXPECT_TRUE(rep.all_pass());
  ReportSummary s;
  for (const auto& r : rep.records) {
    EXPECT_FALSE(r.anchor.empty()) << r.name;
    ++s.total;
    switch (r.status) {
      case CheckStatus::Pass: ++s.passed; break;
      case CheckStatus::Fail: ++s.failed; break;
      case CheckStatus::Error: ++s.errors; break;
      case CheckStatus::Reported: ++s.reported; break;
      case CheckStatus::Skipped: ++s.skipped; break;
    }
  }
  EXPECT_EQ(s.total, rep.summary.total);
  EXPECT_EQ(s.passed, rep.summary.passed);
  EXPECT_EQ(s.failed, rep.summary.failed);
  EXPECT_EQ(s.errors, rep.summary.errors);
  EXPECT_EQ(s.reported, rep.summary.reported);
  EXPECT_EQ(s.skipped, rep.summary.skipped);

  const auto doc = nlohmann::json::parse(report_to_json(rep));
  EXPECT_EQ(doc["artifact"], kArtifactName);
  EXPECT_EQ(doc["summary"]["total"].get<std::size_t>(), rep.records.size());
  for (const auto& c : doc["checks"]) {
    EXPECT_TRUE(c["residual"].is_string());
    EXPECT_TRUE(c.contains("wall_time_ms"));
  }
}

TEST(Suite, RecordsFollowCheckOrder) {
  const auto rep = run_suite(quick_config(0));
  const auto& names = all_check_names();
  std::size_t last = 0;
  for (const auto& r : rep.records) {
    const auto pos = static_cast<std::size_t>(std::find(names.begin(), names.end(), r.name) - names.begin());
    EXPECT_GE(pos, last) << r.name;
    last = pos;
  }
}

TEST(Suite, PerturbationFailsTheFunctionalEquation) {
  SuiteConfig cfg;
  cfg.checks = {"fe", "twist-identity"};
  cfg.perturb = {parse_perturbation("a2=+0.01")};
  const auto rep = run_suite(cfg);
  EXPECT_FALSE(rep.all_pass());
  bool fe_failed = false;
  for (const auto& r : rep.records) {
    if (r.name == "fe" && r.status == CheckStatus::Fail) fe_failed = true;
    if (r.name == "twist-identity") {
      for (const auto& m : r.metrics) {
        if (m.name == "coefficientwise") {
          EXPECT_LT(m.value, 1e-12);
        }
      }
    }
  }
  EXPECT_TRUE(fe_failed);
}

TEST(Suite, InjectedRootNumbersBreakSq) {
  SuiteConfig cfg;
  cfg.primes = {5};
  cfg.checks = {"sq"};
  cfg.inject_root_numbers = {{"5.2", cplx(0, 1)}};
  const auto rep = run_suite(cfg);
  ASSERT_EQ(rep.records.size(), 1U);
  EXPECT_EQ(rep.records[0].status, CheckStatus::Fail);
}

TEST(Suite, ToleranceOverrideLeavesCountsAlone) {
  SuiteConfig cfg;
  cfg.primes = {5};
  cfg.checks = {"fourier"};
  cfg.tolerance = 1e-30;
  const auto rep = run_suite(cfg);
  for (const auto& r : rep.records) {
    for (const auto& m : r.metrics) {
      if (m.name == "ramanujan_sum_mismatch") {
        EXPECT_EQ(m.tolerance, 0.0);
      } else {
        EXPECT_EQ(m.tolerance, 1e-30);
      }
    }
  }
}

TEST(Suite, SkipsWhenCongruenceFails) {
  SuiteConfig cfg;
  cfg.form = "11a";
  cfg.primes = {5};
  cfg.checks = {"sq", "gamma"};
  const auto rep = run_suite(cfg);
  for (const auto& r : rep.records) EXPECT_EQ(r.status, CheckStatus::Skipped) << r.name;
  EXPECT_TRUE(rep.all_pass());
}

TEST(Schema, IsValidJsonWithBothBranches) {
  const auto schema = nlohmann::json::parse(report_schema_json());
  EXPECT_EQ(schema["$schema"], "http://json-schema.org/draft-07/schema#");
  EXPECT_TRUE(schema.contains("oneOf"));
}
