#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lconv/lconv.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int report_error(lconv_status st) {
  std::cerr << "lconv: error " << static_cast<int>(st) << ": " << lconv_last_error() << "\n";
  return kExitUsage;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return true;
  }
  std::ofstream out(path);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

struct VerifyOptions {
  std::string config_path;
  std::string form, primes, checks, perturb, out, inject;
  std::string tolerance, truncation, precision_bits, threads;
  bool quiet = false;
};

std::string override_lines(const VerifyOptions& o) {
  std::string text;
  auto add = [&](const char* key, const std::string& v) {
    if (!v.empty()) text += std::string(key) + " = " + v + "\n";
  };
  add("form", o.form);
  add("primes", o.primes);
  add("checks", o.checks);
  add("tolerance", o.tolerance);
  add("truncation", o.truncation);
  add("precision-bits", o.precision_bits);
  add("perturb", o.perturb);
  add("threads", o.threads);
  add("inject-root-number", o.inject);
  return text;
}

int run_verify(const VerifyOptions& o) {
  std::string config;
  std::string path = o.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("LCONV_CONFIG")) path = env;
  }
  if (!path.empty() && !read_file(path, config)) {
    std::cerr << "lconv: cannot read config file " << path << "\n";
    return kExitUsage;
  }
  config += "\n" + override_lines(o);

  char* json = nullptr;
  int all_pass = 0;
  const lconv_status st = lconv_suite_run(config.c_str(), &json, &all_pass);
  if (st != LCONV_OK) return report_error(st);
  const std::string report = json;
  lconv_string_free(json);
  if (!write_output(o.out, report)) {
    std::cerr << "lconv: cannot write " << o.out << "\n";
    return kExitUsage;
  }
  if (!o.quiet) {
    const auto doc = nlohmann::json::parse(report);
    const auto& s = doc["summary"];
    std::cerr << "lconv: " << s["total"] << " checks, " << s["passed"] << " passed, " << s["failed"]
              << " failed, " << s["errors"] << " errors, " << s["reported"] << " reported, "
              << s["skipped"] << " skipped\n";
    for (const auto& c : doc["checks"]) {
      if (c["pass"].get<bool>()) continue;
      std::cerr << "  " << c["status"].get<std::string>() << " " << c["name"].get<std::string>() << " "
                << c["params"].dump() << ": " << c["message"].get<std::string>() << "\n";
    }
  }
  return all_pass ? kExitPass : kExitFail;
}

int run_json_call(lconv_status (*fn)(char**), const std::string& out) {
  char* json = nullptr;
  const lconv_status st = fn(&json);
  if (st != LCONV_OK) return report_error(st);
  const bool ok = write_output(out, json);
  lconv_string_free(json);
  if (!ok) {
    std::cerr << "lconv: cannot write " << out << "\n";
    return kExitUsage;
  }
  return kExitPass;
}

int run_euler(const std::string& form, const std::string& primes, unsigned J, std::size_t X) {
  lconv_series* s = nullptr;
  lconv_status st = lconv_series_from_form(form.c_str(), X, &s);
  if (st != LCONV_OK) return report_error(st);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::stringstream ps(primes);
  std::string item;
  int code = kExitPass;
  while (std::getline(ps, item, ',')) {
    std::uint64_t q = 0;
    try {
      q = std::stoull(item);
    } catch (const std::exception&) {
      std::cerr << "lconv: bad prime '" << item << "'\n";
      lconv_series_free(s);
      return kExitUsage;
    }
    lconv_euler_data e{};
    st = lconv_euler_factor(s, q, J, &e);
    if (st != LCONV_OK) {
      code = report_error(st);
      break;
    }
    char buf[64];
    auto g = [&](double v) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return std::string(buf);
    };
    nlohmann::ordered_json inv = nlohmann::ordered_json::array();
    for (unsigned j = 0; j <= e.degree_cap && j < 7; ++j) {
      inv.push_back({g(e.inverse_re[j]), g(e.inverse_im[j])});
    }
    rows.push_back({{"q", e.q},
                    {"J", e.degree_cap},
                    {"lambda", {g(e.lambda_re), g(e.lambda_im)}},
                    {"mu", {g(e.mu_re), g(e.mu_im)}},
                    {"epsilon", {g(e.epsilon_re), g(e.epsilon_im)}},
                    {"r", {g(e.r_re), g(e.r_im)}},
                    {"inverse", inv},
                    {"defect", g(e.defect)},
                    {"hecke_defect", g(e.hecke_defect)},
                    {"min_root_modulus", g(e.min_root_modulus)},
                    {"roots_ok", e.roots_ok == 1},
                    {"exact_degree_two", e.exact_degree_two < 0 ? nlohmann::ordered_json(nullptr)
                                                                : nlohmann::ordered_json(e.exact_degree_two == 1)}});
  }
  lconv_series_free(s);
  if (code == kExitPass) std::cout << rows.dump(2) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for twisted L-functions of modular forms"};
  app.set_version_flag("--version", std::string(lconv_version()));
  app.require_subcommand(1);

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--config", vo.config_path, "key = value config file (default: $LCONV_CONFIG)");
  verify->add_option("--form", vo.form, "form descriptor (see list-forms, or file:<csv>)");
  verify->add_option("--primes", vo.primes, "comma-separated primes q");
  verify->add_option("--checks", vo.checks, "comma-separated check names, or all");
  verify->add_option("--tolerance", vo.tolerance, "override every floating-point threshold");
  verify->add_option("--truncation", vo.truncation, "number of coefficients");
  verify->add_option("--precision-bits", vo.precision_bits, "53 or 64");
  verify->add_option("--perturb", vo.perturb, "coefficient shifts, e.g. a2=+0.01");
  verify->add_option("--inject-root-number", vo.inject, "synthetic root numbers, e.g. 5.2=1;1=-1");
  verify->add_option("--threads", vo.threads, "worker threads (0: all cores)");
  verify->add_option("--out", vo.out, "write the JSON report here instead of stdout");
  verify->add_flag("--quiet", vo.quiet, "no summary on stderr");

  std::string forms_out;
  auto* list = app.add_subcommand("list-forms", "print the bundled forms as JSON");
  list->add_option("--out", forms_out);

  std::string schema_out;
  auto* schema = app.add_subcommand("report-schema", "print the JSON schema of all outputs");
  schema->add_option("--out", schema_out);

  std::string euler_form = "delta", euler_primes = "2,3,5,7";
  unsigned euler_J = 6;
  std::size_t euler_X = 0;
  auto* euler = app.add_subcommand("euler", "local Euler data at the given primes");
  euler->add_option("--form", euler_form);
  euler->add_option("--primes", euler_primes);
  euler->add_option("--degree-cap", euler_J)->check(CLI::Range(2, 6));
  euler->add_option("--truncation", euler_X);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  if (*verify) return run_verify(vo);
  if (*list) return run_json_call(lconv_list_forms, forms_out);
  if (*schema) return run_json_call(lconv_report_schema, schema_out);
  if (*euler) return run_euler(euler_form, euler_primes, euler_J, euler_X);
  return kExitUsage;
}
