#include "lconv/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "lconv/characters.hpp"
#include "lconv/converse.hpp"
#include "lconv/error.hpp"
#include "lconv/lfunc.hpp"
#include "lconv/qexp.hpp"

#ifndef LCONV_VERSION
#define LCONV_VERSION "0.0.0"
#endif

namespace converse {

using ojson = nlohmann::ordered_json;

std::string library_version() { return LCONV_VERSION; }

namespace {

constexpr std::size_t kDefaultTruncation = 10000;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad " + what + ": '" + s + "'");
  }
  if (pos != s.size() || s.empty() || s[0] == '-') throw ParseError("bad " + what + ": '" + s + "'");
  return v;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad " + what + ": '" + s + "'");
  }
  if (pos != s.size()) throw ParseError("bad " + what + ": '" + s + "'");
  return v;
}

// "re", "re+imi", "imi"
cplx parse_complex(const std::string& s, const std::string& what) {
  if (s.empty()) throw ParseError("empty " + what);
  if (s.back() != 'i') return parse_double(s, what);
  const std::string body = s.substr(0, s.size() - 1);
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      return {parse_double(body.substr(0, i), what), parse_double(body.substr(i), what)};
    }
  }
  return {0, parse_double(body.empty() || body == "+" || body == "-" ? body + "1" : body, what)};
}

CoefficientSeries parse_eta(const std::string& body, std::size_t X) {
  // <m>^<r>,...:k=<k>:N=<N>
  const auto parts = split(body, ':');
  if (parts.size() != 3 || parts[1].rfind("k=", 0) != 0 || parts[2].rfind("N=", 0) != 0) {
    throw ParseError("eta descriptor must look like eta:1^2,11^2:k=2:N=11");
  }
  std::vector<EtaFactor> spec;
  for (const auto& f : split(parts[0], ',')) {
    const auto caret = f.find('^');
    if (caret == std::string::npos) throw ParseError("eta factor '" + f + "' needs m^r");
    const std::string r = f.substr(caret + 1);
    const bool neg = !r.empty() && r[0] == '-';
    const auto mag = static_cast<std::int64_t>(parse_u64(neg ? r.substr(1) : r, "eta exponent"));
    spec.push_back({parse_u64(f.substr(0, caret), "eta scale"), neg ? -mag : mag});
  }
  return eta_product_coeffs(spec, static_cast<unsigned>(parse_u64(parts[1].substr(2), "weight")),
                            parse_u64(parts[2].substr(2), "level"), X);
}

}  // namespace

std::vector<FormInfo> bundled_forms() {
  return {
      {"delta", "discriminant form eta(z)^24, weight 12, level 1", 1, 12},
      {"11a", "eta(z)^2 eta(11z)^2, weight 2, level 11", 11, 2},
      {"eis:5.4,3.2", "weight-1 Eisenstein series of the pair (5.4, 3.2), level 15", 15, 1},
      {"eis:5.4,5.2", "weight-1 Eisenstein series of the pair (5.4, 5.2), level 25", 25, 1},
  };
}

CoefficientSeries build_form(const std::string& descriptor, std::size_t X,
                             std::vector<std::string>* warnings) {
  const std::string d = trim(descriptor);
  const std::size_t Xg = X == 0 ? kDefaultTruncation : X;
  if (d == "delta") return eta_product_coeffs({{1, 24}}, 12, 1, Xg);
  if (d == "11a") return eta_product_coeffs({{1, 2}, {11, 2}}, 2, 11, Xg);
  if (d.rfind("eta:", 0) == 0) return parse_eta(d.substr(4), Xg);
  if (d.rfind("eis:", 0) == 0) {
    const auto chars = split(d.substr(4), ',');
    if (chars.size() != 2) throw ParseError("eis descriptor needs two characters: eis:5.4,3.2");
    return eisenstein_coeffs(parse_character(chars[0]), parse_character(chars[1]), Xg);
  }
  if (d.rfind("file:", 0) == 0) {
    LoadResult r = load_coeffs(d.substr(5), 0, 0, X);
    if (warnings && !r.multiplicativity_violations.empty()) {
      std::string w = "multiplicativity violated at n =";
      for (std::size_t i = 0; i < std::min<std::size_t>(r.multiplicativity_violations.size(), 10); ++i) {
        w += " " + std::to_string(r.multiplicativity_violations[i]);
      }
      if (r.multiplicativity_violations.size() > 10) w += " ...";
      warnings->push_back(w);
    }
    return std::move(r.series);
  }
  throw ParseError("unknown form descriptor '" + d + "'");
}

Perturbation parse_perturbation(const std::string& text) {
  const std::string t = trim(text);
  const auto eq = t.find('=');
  if (t.size() < 2 || t[0] != 'a' || eq == std::string::npos) {
    throw ParseError("perturbation must look like a2=+0.01, got '" + t + "'");
  }
  Perturbation p;
  p.n = parse_u64(t.substr(1, eq - 1), "perturbation index");
  if (p.n == 0) throw ParseError("perturbation index must be >= 1");
  p.delta = parse_complex(t.substr(eq + 1), "perturbation value");
  p.text = t;
  return p;
}

void apply_config_value(SuiteConfig& cfg, const std::string& key_in, const std::string& value_in) {
  std::string key = trim(key_in);
  std::replace(key.begin(), key.end(), '_', '-');
  const std::string value = trim(value_in);
  if (key == "form") {
    if (value.empty()) throw ParseError("empty form");
    cfg.form = value;
  } else if (key == "primes") {
    cfg.primes.clear();
    for (const auto& p : split(value, ',')) {
      const auto q = parse_u64(p, "prime");
      if (!is_prime(q)) throw ParseError(p + " is not prime");
      cfg.primes.push_back(q);
    }
  } else if (key == "checks") {
    cfg.checks.clear();
    for (const auto& c : split(value, ',')) {
      if (c == "all") {
        cfg.checks.clear();
        return;
      }
      cfg.checks.push_back(c);
    }
  } else if (key == "tolerance") {
    const double t = parse_double(value, "tolerance");
    if (!(t > 0)) throw ParseError("tolerance must be positive");
    cfg.tolerance = t;
  } else if (key == "truncation") {
    cfg.truncation = parse_u64(value, "truncation");
  } else if (key == "precision-bits") {
    const auto b = parse_u64(value, "precision-bits");
    if (b != 53 && b != 64) throw ParseError("precision-bits must be 53 or 64");
    cfg.precision_bits = static_cast<int>(b);
  } else if (key == "perturb") {
    cfg.perturb.clear();
    for (const auto& p : split(value, ',')) {
      if (!p.empty()) cfg.perturb.push_back(parse_perturbation(p));
    }
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "threads") {
    cfg.threads = static_cast<unsigned>(parse_u64(value, "threads"));
  } else if (key == "euler-prime-bound") {
    cfg.euler_prime_bound = parse_u64(value, "euler-prime-bound");
  } else if (key == "inequivalence-bound") {
    cfg.inequivalence_bound = parse_u64(value, "inequivalence-bound");
  } else if (key == "inject-root-number") {
    cfg.inject_root_numbers.clear();
    for (const auto& item : split(value, ';')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ParseError("inject-root-number needs label=value");
      cfg.inject_root_numbers.emplace_back(trim(item.substr(0, eq)),
                                           parse_complex(trim(item.substr(eq + 1)), "root number"));
    }
  } else {
    throw ParseError("unknown config key '" + key + "'");
  }
}

SuiteConfig parse_config_text(const std::string& text, SuiteConfig base) {
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", row);
    try {
      apply_config_value(base, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), row);
    }
  }
  return base;
}

const std::vector<std::string>& all_check_names() {
  static const std::vector<std::string> names = {
      "characters", "fourier", "matrix", "multiplicativity", "euler", "twist-identity",
      "fe", "ramanujan-fe", "dq", "sq", "local-consistency", "gamma", "modularity", "residue-coverage",
      "inequivalence"};
  return names;
}

const std::vector<std::pair<std::string, std::vector<std::string>>>& check_coverage() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> table = {
      {"characters", {"characters_mod", "gauss_sum", "column_orthogonality_exact",
                      "row_orthogonality_exact"}},
      {"fourier", {"verify_additive_fourier_identity", "ramanujan_sum"}},
      {"matrix", {"check_matrix_identity"}},
      {"multiplicativity", {"eta_product_coeffs", "eisenstein_coeffs", "load_coeffs",
                            "check_multiplicativity"}},
      {"euler", {"euler_factor_inverse", "verify_dq_reflection_exact"}},
      {"twist-identity", {"verify_twist_identity", "additive_twist_value"}},
      {"fe", {"twisted_coeffs", "upper_incomplete_gamma", "lambda_completed",
              "estimate_root_number"}},
      {"ramanujan-fe", {"verify_ramanujan_fe", "classify_epsilon"}},
      {"dq", {"verify_dq_reflection", "verify_dq_reflection_exact", "classify_epsilon"}},
      {"sq", {"compute_C_chi", "compute_S_q", "estimate_root_number"}},
      {"local-consistency", {"euler_factor_inverse", "classify_epsilon"}},
      {"gamma", {"verify_gamma_invariance", "check_modularity", "slash_eval", "eval_form"}},
      {"modularity", {"estimate_phase", "check_modularity", "slash_eval", "eval_form",
                      "twisted_coeffs"}},
      {"residue-coverage", {"find_nonvanishing_residue"}},
      {"inequivalence", {"euler_inequivalence"}},
  };
  return table;
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Error: return "error";
    case CheckStatus::Reported: return "reported";
    case CheckStatus::Skipped: return "skipped";
  }
  return "error";
}

namespace {

const std::map<std::string, std::string>& anchors() {
  static const std::map<std::string, std::string> m = {
      {"characters", "character orthogonality and Gauss sum modulus"},
      {"fourier", "additive character expansion of e(n/q)"},
      {"matrix", "Fricke and translation matrix products"},
      {"multiplicativity", "plumbing"},
      {"euler", "Euler factor inverse is a polynomial of degree two"},
      {"twist-identity", "additive twist decomposition into character twists"},
      {"fe", "functional equation of character twists"},
      {"ramanujan-fe", "functional equation of the Ramanujan-sum twist"},
      {"dq", "reflection of the local factor D_q"},
      {"sq", "S_q is identically one on units"},
      {"local-consistency", "local consistency r = 0, |mu| = 1, eps = 1 for real lambda"},
      {"gamma", "invariance under gamma_{q,b}"},
      {"modularity", "Fricke phase and translation invariance"},
      {"residue-coverage", "nonvanishing coefficients in every residue class"},
      {"inequivalence", "Euler data separate inequivalent forms"},
  };
  return m;
}

using Params = std::vector<std::pair<std::string, std::string>>;

std::string cplx_str(cplx z) { return format_g17(z.real()) + (z.imag() < 0 ? "" : "+") +
                                      format_g17(z.imag()) + "i"; }

struct Job {
  std::string name;
  Params params;
  std::function<void(CheckRecord&)> run;
};

class SuiteRunner {
public:
  SuiteRunner(const SuiteConfig& cfg, CoefficientSeries f) : cfg_(cfg), f_(std::move(f)) {
    for (const auto& [label, eps] : cfg_.inject_root_numbers) {
      RootNumberEstimate e;
      e.epsilon = eps;
      e.unimodularity_defect = std::abs(std::abs(eps) - 1);
      e.diagnostic = "injected";
      std::promise<RootNumberEstimate> p;
      p.set_value(e);
      cache_.emplace(label, p.get_future().share());
    }
  }

  std::vector<CheckRecord> run(const std::vector<std::string>& checks) {
    std::vector<Job> jobs;
    for (const auto& name : checks) add_jobs(name, jobs);
    std::vector<CheckRecord> out(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) execute(jobs[i], out[i]);
    };
    unsigned n = cfg_.threads ? cfg_.threads : std::max(1U, std::thread::hardware_concurrency());
    n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
  }

private:
  const SuiteConfig& cfg_;
  const CoefficientSeries f_;
  std::mutex mu_;
  std::map<std::string, std::shared_future<RootNumberEstimate>> cache_;

  double tol(double t) const { return cfg_.tolerance && t > 0 ? *cfg_.tolerance : t; }
  Metric metric(const std::string& name, double value, double t, bool asserted = true) const {
    return {name, value, tol(t), asserted};
  }

  bool congruent(std::uint64_t q) const { return q % f_.level() == 1 % f_.level(); }
  bool genuine() const { return f_.provenance() != Provenance::CharacterPair; }

  std::vector<DirichletCharacter> primitive_nontrivial(std::uint64_t q) const {
    std::vector<DirichletCharacter> out;
    for (auto& chi : characters_mod(q)) {
      if (chi.is_primitive() && !chi.is_trivial()) out.push_back(chi);
    }
    return out;
  }

  RootNumberEstimate root_number(const std::optional<DirichletCharacter>& chi) {
    const std::string key = chi ? chi->name() : "1";
    std::promise<RootNumberEstimate> promise;
    std::shared_future<RootNumberEstimate> existing;
    {
      std::lock_guard<std::mutex> lock(mu_);
      const auto it = cache_.find(key);
      if (it != cache_.end()) {
        existing = it->second;
      } else {
        cache_.emplace(key, promise.get_future().share());
      }
    }
    if (existing.valid()) return existing.get();
    try {
      const TwistSpec t = chi ? TwistSpec::character(*chi) : TwistSpec::untwisted();
      const CoefficientSeries b = twist_for_lfunction(f_, t);
      const CompletedLContext ctx = make_context(b, chi ? chi->modulus() : 1, 1e-9, cfg_.precision_bits);
      auto est = estimate_root_number(b, ctx, default_root_number_samples());
      promise.set_value(est);
      return est;
    } catch (...) {
      promise.set_exception(std::current_exception());
      throw;
    }
  }

  void execute(Job& job, CheckRecord& rec) {
    rec.name = job.name;
    rec.anchor = anchors().at(job.name);
    rec.params = job.params;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      job.run(rec);
      if (rec.status != CheckStatus::Skipped) {
        bool asserted = false, ok = true;
        for (const auto& m : rec.metrics) {
          asserted = asserted || m.asserted;
          ok = ok && m.pass();
        }
        if (!ok) {
          rec.status = CheckStatus::Fail;
        } else {
          rec.status = asserted ? CheckStatus::Pass : CheckStatus::Reported;
        }
        if (rec.status == CheckStatus::Fail && rec.message.empty()) {
          for (const auto& m : rec.metrics) {
            if (!m.pass()) {
              rec.message += (rec.message.empty() ? "" : "; ") + m.name + " = " +
                             format_g17(m.value) + " > " + format_g17(m.tolerance);
            }
          }
        }
      }
    } catch (const std::exception& e) {
      rec.status = CheckStatus::Error;
      rec.message = e.what();
    }
    if (!rec.metrics.empty()) {
      rec.residual = rec.metrics.front().value;
      rec.tolerance = rec.metrics.front().tolerance;
    }
    rec.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }

  static void skip(CheckRecord& rec, const std::string& why) {
    rec.status = CheckStatus::Skipped;
    rec.message = why;
  }

  void add_jobs(const std::string& name, std::vector<Job>& jobs);
};

void SuiteRunner::add_jobs(const std::string& name, std::vector<Job>& jobs) {
  const auto& primes = cfg_.primes;
  const auto qs = [](std::uint64_t q) { return Params{{"q", std::to_string(q)}}; };

  if (name == "characters") {
    jobs.push_back({name, {{"q_max", "50"}}, [this](CheckRecord& rec) {
      double orth_failures = 0, gauss = 0, conj = 0;
      for (std::uint64_t q = 1; q <= 50; ++q) {
        const auto chars = characters_mod(q);
        for (std::size_t i = 0; i < chars.size(); ++i) {
          for (std::size_t j = i; j < chars.size(); ++j) {
            if (!row_orthogonality_exact(chars[i], chars[j])) ++orth_failures;
          }
          if (chars[i].is_primitive()) {
            const cplx tau = gauss_sum(chars[i]);
            const double qd = static_cast<double>(q);
            gauss = std::max(gauss, std::abs(std::norm(tau) - qd) / qd);
            const cplx tau_bar = gauss_sum(chars[i].conj());
            conj = std::max(conj, std::abs(tau_bar - static_cast<double>(chars[i].parity()) * std::conj(tau)));
          }
        }
        for (std::uint64_t a = 1; a <= q; ++a) {
          if (gcd_u64(a, q) != 1) continue;
          for (std::uint64_t b = a; b <= q; ++b) {
            if (gcd_u64(b, q) != 1) continue;
            if (!column_orthogonality_exact(chars, static_cast<std::int64_t>(a),
                                            static_cast<std::int64_t>(b))) {
              ++orth_failures;
            }
          }
        }
      }
      rec.metrics = {metric("gauss_modulus_relative", gauss, 1e-12),
                     {"orthogonality_failures", orth_failures, 0, true},
                     metric("gauss_conjugation", conj, 1e-12)};
    }});
  } else if (name == "fourier") {
    for (const auto q : primes) {
      jobs.push_back({name, qs(q), [this, q](CheckRecord& rec) {
        double worst = 0, ram = 0;
        const auto qi = static_cast<std::int64_t>(q);
        for (std::int64_t n = -2 * qi; n <= 2 * qi; ++n) {
          worst = std::max(worst, verify_additive_fourier_identity(q, n));
          const std::int64_t expect = mod_floor(n, qi) == 0 ? qi - 1 : -1;
          ram = std::max(ram, static_cast<double>(std::abs(ramanujan_sum(q, n) - expect)));
        }
        rec.metrics = {metric("max_residual", worst, 1e-12), {"ramanujan_sum_mismatch", ram, 0, true}};
      }});
    }
  } else if (name == "matrix") {
    std::set<std::int64_t> levels{static_cast<std::int64_t>(f_.level()), 1, 11, 15};
    for (const auto N : levels) {
      jobs.push_back({name, {{"N", std::to_string(N)}, {"M", "-3..10"}}, [N](CheckRecord& rec) {
        double failures = 0;
        for (std::int64_t M = -3; M <= 10; ++M) {
          if (!check_matrix_identity(N, M).ok()) ++failures;
        }
        rec.metrics = {{"failures", failures, 0, true}};
      }});
    }
  } else if (name == "multiplicativity") {
    jobs.push_back({name, {{"X", std::to_string(f_.length())}}, [this](CheckRecord& rec) {
      const auto bad = check_multiplicativity(f_);
      rec.metrics = {{"violations", static_cast<double>(bad.size()), 0, true}};
      if (!bad.empty()) rec.message = "first violation at n = " + std::to_string(bad.front());
    }});
  } else if (name == "euler") {
    std::set<std::uint64_t> ps(primes.begin(), primes.end());
    for (const auto p : primes_up_to(cfg_.euler_prime_bound)) ps.insert(p);
    for (const auto q : ps) {
      jobs.push_back({name, qs(q), [this, q](CheckRecord& rec) {
        const unsigned J = supported_degree(f_, q, 6);
        rec.params.emplace_back("J", std::to_string(J));
        if (J < 2) return skip(rec, "series too short for a_{q^2}");
        const auto e = euler_factor_inverse(f_, q, J);
        rec.metrics = {metric("inverse_defect_c3_c6", e.defect, kDegreeTwoDefectTolerance),
                       metric("hecke_recursion", e.hecke_defect, 1e-9),
                       {"root_condition_failures", e.roots_ok ? 0.0 : 1.0, 0, true}};
        if (e.exact_degree_two) {
          rec.metrics.push_back({"exact_degree_two_failures", *e.exact_degree_two ? 0.0 : 1.0, 0, true});
        }
        if (J < 3) rec.message = "degree cap J = 2: no coefficient beyond c_2 is available";
      }});
    }
  } else if (name == "twist-identity") {
    for (const auto q : primes) {
      jobs.push_back({name, qs(q), [this, q](CheckRecord& rec) {
        double num = 0, coef = 0;
        for (const cplx s : {cplx(2, 0), cplx(2, 1)}) {
          const auto r = verify_twist_identity(f_, q, s);
          num = std::max(num, r.numeric_residual);
          coef = std::max(coef, r.coefficientwise_defect);
        }
        rec.params.emplace_back("s", "2, 2+i");
        rec.metrics = {metric("numeric_residual", num, 1e-10), metric("coefficientwise_defect", coef, 1e-12)};
      }});
    }
  } else if (name == "fe") {
    auto fe_job = [this](std::optional<DirichletCharacter> chi) {
      return [this, chi](CheckRecord& rec) {
        const auto est = root_number(chi);
        const TwistSpec t = chi ? TwistSpec::character(*chi) : TwistSpec::untwisted();
        const CoefficientSeries b = twist_for_lfunction(f_, t);
        const auto ctx = make_context(b, chi ? chi->modulus() : 1, 1e-9, cfg_.precision_bits);
        const double Y0 = ctx.default_split();
        double yi = 0;
        for (const cplx s : {cplx(0.5, 0), cplx(0.5, 1), cplx(0.75, 0)}) {
          yi = std::max(yi, y_independence(b, s, est.epsilon, Y0, 2 * Y0, ctx).relative);
        }
        rec.params.emplace_back("root_number", cplx_str(est.epsilon));
        rec.metrics = {metric("y_independence", yi, 1e-8), metric("root_number_spread", est.spread, 1e-7),
                       metric("root_number_unimodularity", est.unimodularity_defect, 1e-8)};
        if (!est.diagnostic.empty()) rec.message = est.diagnostic;
      };
    };
    jobs.push_back({name, {{"twist", "1"}}, fe_job(std::nullopt)});
    for (const auto q : primes) {
      if (f_.level() % q == 0) continue;
      for (const auto& chi : primitive_nontrivial(q)) {
        jobs.push_back({name, {{"q", std::to_string(q)}, {"twist", chi.name()}}, fe_job(chi)});
      }
    }
  } else if (name == "ramanujan-fe") {
    for (const auto q : primes) {
      jobs.push_back({name, qs(q), [this, q](CheckRecord& rec) {
        if (!congruent(q)) return skip(rec, "q is not 1 mod N");
        const auto eps1 = root_number(std::nullopt).epsilon;
        const auto r = verify_ramanujan_fe(f_, q, eps1, {cplx(0.5, 0), cplx(0.5, 1), cplx(0.75, 0)}, 1e-9,
                                           cfg_.precision_bits);
        rec.params.emplace_back("fe_constant", cplx_str(r.fe_constant));
        rec.metrics = {metric("dq_factorization", r.residual_a, 1e-8), metric("y_independence", r.residual_b, 1e-8)};
      }});
    }
  } else if (name == "dq") {
    for (const auto q : primes) {
      jobs.push_back({name, qs(q), [this, q](CheckRecord& rec) {
        const auto* exact = f_.exact_raw();
        if (exact && q * q <= f_.length() && f_.weight() % 2 == 0) {
          const auto r = verify_dq_reflection_exact((*exact)[q - 1], (*exact)[q * q - 1], q, f_.weight());
          rec.params.emplace_back("arithmetic", "exact");
          rec.metrics = {{"exact_failures", r.exact_pass ? 0.0 : 1.0, 0, true},
                         metric("float_defect", r.float_defect, 1e-12)};
          return;
        }
        const unsigned J = supported_degree(f_, q, 2);
        if (J < 2) throw InsufficientTruncation("dq needs a_{q^2}", q * q);
        const auto e = euler_factor_inverse(f_, q, 2);
        const auto r = verify_dq_reflection(e.lambda, e.mu, q);
        rec.params.emplace_back("arithmetic", "float");
        rec.metrics = {metric("float_defect", r.float_defect, 1e-12)};
      }});
    }
  } else if (name == "sq") {
    for (const auto q : primes) {
      jobs.push_back({name, qs(q), [this, q](CheckRecord& rec) {
        if (!congruent(q)) return skip(rec, "q is not 1 mod N");
        const unsigned J = supported_degree(f_, q, 6);
        if (J < 2) throw InsufficientTruncation("sq needs a_{q^2}", q * q);
        const auto e = euler_factor_inverse(f_, q, J);
        PhaseData phases;
        phases.eps1 = root_number(std::nullopt).epsilon;
        for (const auto& chi : characters_mod(q)) {
          if (!chi.is_trivial()) phases.eps_chi[chi.label()] = root_number(chi).epsilon;
        }
        auto data = build_sq_input(q, f_.level(), e, phases);
        const auto rep = compute_S_q(data);
        const bool assert_sq = genuine();
        // Predicted coefficients of f|gamma_{q,1} against f itself.
        const auto pred = predicted_gamma_coefficients(f_, data, 1);
        double pred_defect = 0;
        for (std::size_t n = 1; n <= pred.size(); ++n) {
          const double scale = std::pow(static_cast<double>(n), (f_.weight() - 1) / 2.0);
          const cplxl fn = f_.raw(n);
          pred_defect = std::max(pred_defect, std::abs(pred[n - 1] - cplx(static_cast<double>(fn.real()),
                                                                          static_cast<double>(fn.imag()))) /
                                                  scale);
        }
        rec.metrics = {metric("coprime_defect", rep.coprime_defect, 1e-6, assert_sq),
                       metric("zero_defect", rep.zero_defect, 1e-10, assert_sq),
                       metric("reconstruction_defect", rep.reconstruction_defect, 1e-10),
                       metric("inverse_transform_defect", rep.inverse_transform_defect, 1e-10, assert_sq),
                       metric("root_number_unimodularity", data.root_number_defect, 1e-8, assert_sq),
                       metric("gamma_coefficient_prediction", pred_defect, 1e-6, assert_sq)};
        if (!assert_sq) rec.message = "character-pair input: S_q reported, not asserted";
      }});
    }
  } else if (name == "local-consistency") {
    for (const auto q : primes) {
      jobs.push_back({name, qs(q), [this, q](CheckRecord& rec) {
        if (!congruent(q)) return skip(rec, "q is not 1 mod N");
        const unsigned J = supported_degree(f_, q, 6);
        if (J < 2) throw InsufficientTruncation("local-consistency needs a_{q^2}", q * q);
        const auto tc = local_consistency(euler_factor_inverse(f_, q, J));
        rec.metrics = {metric("r_abs", tc.r_abs, 1e-8), metric("mu_unimodularity", tc.mu_unimodularity, 1e-8)};
        if (tc.lambda_real_nonzero) rec.metrics.push_back(metric("eps_defect", tc.eps_defect, 1e-8));
      }});
    }
  } else if (name == "gamma") {
    for (const auto q : primes) {
      std::vector<std::int64_t> bs;
      for (std::int64_t b = 1; b < static_cast<std::int64_t>(q) && bs.size() < 3; ++b) bs.push_back(b);
      bs.push_back(static_cast<std::int64_t>(q));
      for (const auto b : bs) {
        jobs.push_back({name, {{"q", std::to_string(q)}, {"b", std::to_string(b)}}, [this, q, b](CheckRecord& rec) {
          if (!congruent(q)) return skip(rec, "q is not 1 mod N");
          const auto r = verify_gamma_invariance(f_, q, b);
          rec.params.emplace_back("gamma", r.gamma.str());
          rec.metrics = {metric("residual", r.residual, 1e-8)};
        }});
      }
    }
  } else if (name == "modularity") {
    jobs.push_back({name, {{"matrix", "H_N, P, [[1,0],[N,1]]"}}, [this](CheckRecord& rec) {
      const auto N = static_cast<std::int64_t>(f_.level());
      const double y0 = 1 / std::sqrt(static_cast<double>(N));
      std::vector<UpperHalfPoint> pts;
      for (const auto& [dx, dy] : std::vector<std::pair<double, double>>{{0, 1}, {0.07, 1.05}, {-0.11, 0.95}, {0.2, 0.9}}) {
        pts.emplace_back(dx * y0, dy * y0);
      }
      const auto ph = estimate_phase(f_, IntMat2::fricke(N), pts, false, true);
      const double tr = check_modularity(f_, IntMat2::translation(1), 1.0, pts, false, false);
      const IntMat2 lower{1, 0, N, 1};
      const double lo = check_modularity(f_, lower, 1.0, balanced_points(lower), false, false);
      rec.params.emplace_back("fricke_phase", cplx_str(ph.omega));
      rec.metrics = {metric("translation", tr, 1e-8), metric("lower_unipotent", lo, 1e-8),
                     metric("fricke_spread", ph.spread, 1e-8, genuine()),
                     metric("fricke_unimodularity", ph.unimodularity_defect, 1e-8, genuine())};
    }});
  } else if (name == "residue-coverage") {
    for (const auto q : primes) {
      jobs.push_back({name, qs(q), [this, q](CheckRecord& rec) {
        if (f_.level() % q == 0) return skip(rec, "q divides N");
        double missing = 0;
        std::uint64_t worst = 0;
        for (std::int64_t a = 1; a < static_cast<std::int64_t>(q); ++a) {
          const auto n = find_nonvanishing_residue(f_, q, a, f_.length());
          if (!n) {
            ++missing;
          } else {
            worst = std::max(worst, *n);
          }
        }
        rec.params.emplace_back("largest_first_index", std::to_string(worst));
        rec.metrics = {{"residues_without_support", missing, 0, true}};
      }});
    }
  } else if (name == "inequivalence") {
    for (const auto& form : bundled_forms()) {
      if (form.descriptor == cfg_.form && cfg_.perturb.empty()) continue;
      jobs.push_back({name, {{"against", form.descriptor}}, [this, form](CheckRecord& rec) {
        const auto other = build_form(form.descriptor, std::max<std::size_t>(f_.length(), 1));
        const std::uint64_t B = std::min<std::uint64_t>(cfg_.inequivalence_bound, f_.length());
        const auto p = euler_inequivalence(f_, other, B);
        rec.params.emplace_back("B", std::to_string(B));
        rec.params.emplace_back("first_prime", p ? std::to_string(*p) : "none");
        rec.metrics = {{"equivalent", p ? 0.0 : 1.0, 0, true}};
      }});
    }
  } else {
    throw InvalidArgument("unknown check '" + name + "'");
  }
}

}  // namespace

VerificationReport run_suite(const SuiteConfig& cfg) {
  std::vector<std::string> checks = cfg.checks.empty() ? all_check_names() : cfg.checks;
  for (const auto& c : checks) {
    const auto& names = all_check_names();
    if (std::find(names.begin(), names.end(), c) == names.end()) {
      throw InvalidArgument("unknown check '" + c + "'");
    }
  }
  if (cfg.precision_bits != 53 && cfg.precision_bits != 64) {
    throw InvalidArgument("precision_bits must be 53 or 64");
  }
  VerificationReport rep;
  rep.version = library_version();
  rep.form = cfg.form;
  rep.config = cfg;
  CoefficientSeries f = build_form(cfg.form, cfg.truncation, &rep.warnings);
  for (const auto& p : cfg.perturb) f = f.perturbed(p.n, p.delta);
  rep.descriptor = f.descriptor();
  rep.level = f.level();
  rep.weight = f.weight();
  rep.truncation = f.length();

  SuiteRunner runner(cfg, std::move(f));
  rep.records = runner.run(checks);
  for (const auto& r : rep.records) {
    ++rep.summary.total;
    switch (r.status) {
      case CheckStatus::Pass: ++rep.summary.passed; break;
      case CheckStatus::Fail: ++rep.summary.failed; break;
      case CheckStatus::Error: ++rep.summary.errors; break;
      case CheckStatus::Reported: ++rep.summary.reported; break;
      case CheckStatus::Skipped: ++rep.summary.skipped; break;
    }
  }
  return rep;
}

std::string report_to_json(const VerificationReport& r, bool include_timing) {
  ojson input;
  input["form"] = r.form;
  input["descriptor"] = r.descriptor;
  input["level"] = r.level;
  input["weight"] = r.weight;
  input["truncation"] = r.truncation;
  input["primes"] = r.config.primes;
  input["checks"] = r.config.checks.empty() ? all_check_names() : r.config.checks;
  input["precision_bits"] = r.config.precision_bits;
  input["tolerance_override"] =
      r.config.tolerance ? ojson(format_g17(*r.config.tolerance)) : ojson(nullptr);
  ojson perturb = ojson::array();
  for (const auto& p : r.config.perturb) perturb.push_back(p.text);
  input["perturbations"] = perturb;
  ojson injected = ojson::object();
  for (const auto& [label, eps] : r.config.inject_root_numbers) injected[label] = cplx_str(eps);
  input["injected_root_numbers"] = injected;
  input["warnings"] = r.warnings;

  ojson checks = ojson::array();
  for (const auto& c : r.records) {
    ojson rec;
    rec["name"] = c.name;
    rec["anchor"] = c.anchor;
    ojson params = ojson::object();
    for (const auto& [k, v] : c.params) params[k] = v;
    rec["params"] = params;
    rec["residual"] = format_g17(c.residual);
    rec["tolerance"] = format_g17(c.tolerance);
    rec["pass"] = c.pass();
    rec["status"] = to_string(c.status);
    ojson metrics = ojson::array();
    for (const auto& m : c.metrics) {
      metrics.push_back({{"name", m.name},
                         {"value", format_g17(m.value)},
                         {"tolerance", format_g17(m.tolerance)},
                         {"asserted", m.asserted},
                         {"pass", m.pass()}});
    }
    rec["metrics"] = metrics;
    rec["message"] = c.message;
    if (include_timing) rec["wall_time_ms"] = c.wall_time_ms;
    checks.push_back(rec);
  }
  ojson doc;
  doc["artifact"] = kArtifactName;
  doc["version"] = r.version;
  doc["input"] = input;
  doc["checks"] = checks;
  doc["summary"] = {{"total", r.summary.total},     {"passed", r.summary.passed},
                    {"failed", r.summary.failed},   {"errors", r.summary.errors},
                    {"reported", r.summary.reported}, {"skipped", r.summary.skipped},
                    {"all_pass", r.all_pass()}};
  return doc.dump(2) + "\n";
}

std::string forms_to_json(const std::vector<FormInfo>& forms) {
  ojson arr = ojson::array();
  for (const auto& f : forms) {
    arr.push_back({{"descriptor", f.descriptor}, {"description", f.description},
                   {"level", f.level}, {"weight", f.weight}});
  }
  ojson doc;
  doc["artifact"] = kArtifactName;
  doc["version"] = library_version();
  doc["forms"] = arr;
  return doc.dump(2) + "\n";
}

std::string report_schema_json() {
  static const char* schema = R"json({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "lconv output",
  "oneOf": [{"$ref": "#/definitions/report"}, {"$ref": "#/definitions/forms"}],
  "definitions": {
    "g17": {"type": "string", "pattern": "^(-?(inf|nan)|-?[0-9]+(\\.[0-9]+)?(e[-+][0-9]+)?)$"},
    "metric": {
      "type": "object",
      "required": ["name", "value", "tolerance", "asserted", "pass"],
      "additionalProperties": false,
      "properties": {
        "name": {"type": "string"},
        "value": {"$ref": "#/definitions/g17"},
        "tolerance": {"$ref": "#/definitions/g17"},
        "asserted": {"type": "boolean"},
        "pass": {"type": "boolean"}
      }
    },
    "check": {
      "type": "object",
      "required": ["name", "anchor", "params", "residual", "tolerance", "pass", "status", "metrics", "message"],
      "additionalProperties": false,
      "properties": {
        "name": {"enum": ["characters", "fourier", "matrix", "multiplicativity", "euler", "twist-identity",
                          "fe", "ramanujan-fe", "dq", "sq", "local-consistency", "gamma", "modularity", "residue-coverage",
                          "inequivalence"]},
        "anchor": {"type": "string", "minLength": 1},
        "params": {"type": "object", "additionalProperties": {"type": "string"}},
        "residual": {"$ref": "#/definitions/g17"},
        "tolerance": {"$ref": "#/definitions/g17"},
        "pass": {"type": "boolean"},
        "status": {"enum": ["pass", "fail", "error", "reported", "skipped"]},
        "metrics": {"type": "array", "items": {"$ref": "#/definitions/metric"}},
        "message": {"type": "string"},
        "wall_time_ms": {"type": "number", "minimum": 0}
      }
    },
    "report": {
      "type": "object",
      "required": ["artifact", "version", "input", "checks", "summary"],
      "additionalProperties": false,
      "properties": {
        "artifact": {"const": "lconv"},
        "version": {"type": "string"},
        "input": {
          "type": "object",
          "required": ["form", "descriptor", "level", "weight", "truncation", "primes", "checks",
                       "precision_bits", "tolerance_override", "perturbations", "warnings"],
          "properties": {
            "form": {"type": "string"},
            "descriptor": {"type": "string"},
            "level": {"type": "integer", "minimum": 1},
            "weight": {"type": "integer", "minimum": 1},
            "truncation": {"type": "integer", "minimum": 1},
            "primes": {"type": "array", "items": {"type": "integer", "minimum": 2}},
            "checks": {"type": "array", "items": {"type": "string"}},
            "precision_bits": {"enum": [53, 64]},
            "tolerance_override": {"type": ["string", "null"]},
            "perturbations": {"type": "array", "items": {"type": "string"}},
            "injected_root_numbers": {"type": "object", "additionalProperties": {"type": "string"}},
            "warnings": {"type": "array", "items": {"type": "string"}}
          }
        },
        "checks": {"type": "array", "items": {"$ref": "#/definitions/check"}},
        "summary": {
          "type": "object",
          "required": ["total", "passed", "failed", "errors", "reported", "skipped", "all_pass"],
          "additionalProperties": false,
          "properties": {
            "total": {"type": "integer", "minimum": 0},
            "passed": {"type": "integer", "minimum": 0},
            "failed": {"type": "integer", "minimum": 0},
            "errors": {"type": "integer", "minimum": 0},
            "reported": {"type": "integer", "minimum": 0},
            "skipped": {"type": "integer", "minimum": 0},
            "all_pass": {"type": "boolean"}
          }
        }
      }
    },
    "forms": {
      "type": "object",
      "required": ["artifact", "version", "forms"],
      "additionalProperties": false,
      "properties": {
        "artifact": {"const": "lconv"},
        "version": {"type": "string"},
        "forms": {
          "type": "array",
          "minItems": 1,
          "items": {
            "type": "object",
            "required": ["descriptor", "description", "level", "weight"],
            "additionalProperties": false,
            "properties": {
              "descriptor": {"type": "string", "minLength": 1},
              "description": {"type": "string"},
              "level": {"type": "integer", "minimum": 1},
              "weight": {"type": "integer", "minimum": 1}
            }
          }
        }
      }
    }
  }
}
)json";
  return schema;
}

}  // namespace converse
