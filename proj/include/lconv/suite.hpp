#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lconv/series.hpp"

namespace converse {

inline constexpr const char* kArtifactName = "lconv";
std::string library_version();

struct FormInfo {
  std::string descriptor;
  std::string description;
  std::uint64_t level = 1;
  unsigned weight = 2;
};

/// Generators shipped with the library.
std::vector<FormInfo> bundled_forms();

/// Builds the series named by a descriptor:
///   delta | 11a | eis:<chi1>,<chi2> | eta:<m>^<r>,...:k=<k>:N=<N> | file:<path>
/// X = 0 selects the default truncation (10^4 generated terms, all rows of a file).
/// Multiplicativity violations of file input are appended to `warnings`.
CoefficientSeries build_form(const std::string& descriptor, std::size_t X = 0,
                             std::vector<std::string>* warnings = nullptr);

/// a<n>=<delta>, delta real or ending in 'i' for an imaginary shift.
struct Perturbation {
  std::size_t n = 0;
  cplx delta;
  std::string text;
};
Perturbation parse_perturbation(const std::string& text);

struct SuiteConfig {
  std::string form = "delta";
  std::vector<std::uint64_t> primes{5, 7};
  std::vector<std::string> checks;  // empty: every check
  std::optional<double> tolerance;  // overrides every floating-point threshold
  std::size_t truncation = 0;
  int precision_bits = 53;
  std::vector<Perturbation> perturb;
  std::string out;
  unsigned threads = 0;  // 0: hardware concurrency
  std::uint64_t euler_prime_bound = 97;
  std::uint64_t inequivalence_bound = 100;
  /// Synthetic root numbers replacing the estimated ones, keyed "1" or "q.m".
  std::vector<std::pair<std::string, cplx>> inject_root_numbers;
};

/// key = value lines; '#' starts a comment. Keys mirror the CLI flags
/// (form, primes, checks, tolerance, truncation, precision-bits, perturb, out,
/// threads, euler-prime-bound, inequivalence-bound, inject-root-number).
/// Values are applied on top of `base`. Throws ParseError with the line number.
SuiteConfig parse_config_text(const std::string& text, SuiteConfig base = {});
void apply_config_value(SuiteConfig& cfg, const std::string& key, const std::string& value);

/// Every check name accepted by run_suite, in execution order.
const std::vector<std::string>& all_check_names();

/// Library operations exercised by each check name.
const std::vector<std::pair<std::string, std::vector<std::string>>>& check_coverage();

enum class CheckStatus { Pass, Fail, Error, Reported, Skipped };
std::string to_string(CheckStatus s);

struct Metric {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool asserted = true;  // false: reported only
  bool pass() const { return !asserted || value <= tolerance; }
};

struct CheckRecord {
  std::string name;
  std::string anchor;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<Metric> metrics;
  double residual = 0;   // first metric
  double tolerance = 0;
  CheckStatus status = CheckStatus::Pass;
  std::string message;
  double wall_time_ms = 0;
  bool pass() const { return status == CheckStatus::Pass || status == CheckStatus::Reported ||
                             status == CheckStatus::Skipped; }
};

struct ReportSummary {
  std::size_t total = 0, passed = 0, failed = 0, errors = 0, reported = 0, skipped = 0;
};

struct VerificationReport {
  std::string version;
  std::string form;
  std::string descriptor;
  std::uint64_t level = 1;
  unsigned weight = 2;
  std::size_t truncation = 0;
  SuiteConfig config;
  std::vector<std::string> warnings;
  std::vector<CheckRecord> records;
  ReportSummary summary;
  bool all_pass() const { return summary.failed == 0 && summary.errors == 0; }
};

/// Runs the selected checks. Unknown check names and unusable forms throw
/// (InvalidArgument / ParseError / Error); numeric trouble inside a check is
/// recorded as an error for that check and the suite continues.
VerificationReport run_suite(const SuiteConfig& cfg);

/// Single JSON document; residuals and tolerances as 17-digit strings.
std::string report_to_json(const VerificationReport& r, bool include_timing = true);
std::string report_schema_json();
std::string forms_to_json(const std::vector<FormInfo>& forms);

}  // namespace converse
