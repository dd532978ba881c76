#include "lconv/lconv.h"

#include <cstring>
#include <string>

#include "lconv/error.hpp"
#include "lconv/series.hpp"
#include "lconv/suite.hpp"

struct lconv_series {
  converse::CoefficientSeries series;
};

namespace {

thread_local std::string g_last_error;

lconv_status fail(lconv_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

template <class F>
lconv_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const converse::Error& e) {
    return fail(static_cast<lconv_status>(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(LCONV_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(LCONV_INTERNAL_ERROR, "unknown exception");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* lconv_version(void) {
  static const std::string v = converse::library_version();
  return v.c_str();
}

const char* lconv_last_error(void) { return g_last_error.c_str(); }

lconv_status lconv_series_from_form(const char* descriptor, size_t X, lconv_series** out) {
  if (!descriptor || !out) return fail(LCONV_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new lconv_series{converse::build_form(descriptor, X)};
    return LCONV_OK;
  });
}

lconv_status lconv_series_load_csv(const char* path, uint64_t N, unsigned k, size_t X,
                                   lconv_series** out, size_t* n_violations) {
  if (!path || !out) return fail(LCONV_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto r = converse::load_coeffs(path, N, k, X);
    if (n_violations) *n_violations = r.multiplicativity_violations.size();
    *out = new lconv_series{std::move(r.series)};
    return LCONV_OK;
  });
}

void lconv_series_free(lconv_series* s) { delete s; }

lconv_status lconv_series_info_get(const lconv_series* s, lconv_series_info* info) {
  if (!s || !info) return fail(LCONV_INVALID_ARGUMENT, "null argument");
  info->level = s->series.level();
  info->weight = s->series.weight();
  info->length = s->series.length();
  info->growth_constant = s->series.growth_constant();
  info->has_exact_data = s->series.exact_raw() != nullptr;
  return LCONV_OK;
}

lconv_status lconv_series_coeff(const lconv_series* s, size_t n, double* re, double* im) {
  if (!s || !re || !im) return fail(LCONV_INVALID_ARGUMENT, "null argument");
  if (n == 0 || n > s->series.length()) {
    return fail(LCONV_INVALID_ARGUMENT, "index " + std::to_string(n) + " out of range");
  }
  const auto a = s->series.a(n);
  *re = a.real();
  *im = a.imag();
  return LCONV_OK;
}

lconv_status lconv_series_perturb(const lconv_series* s, size_t n, double re, double im,
                                  lconv_series** out) {
  if (!s || !out) return fail(LCONV_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new lconv_series{s->series.perturbed(n, {re, im})};
    return LCONV_OK;
  });
}

lconv_status lconv_euler_factor(const lconv_series* s, uint64_t q, unsigned J, lconv_euler_data* out) {
  if (!s || !out) return fail(LCONV_INVALID_ARGUMENT, "null argument");
  if (J > 6) return fail(LCONV_INVALID_ARGUMENT, "degree cap above 6");
  return guarded([&] {
    const auto e = converse::euler_factor_inverse(s->series, q, J);
    *out = lconv_euler_data{};
    out->q = e.q;
    out->degree_cap = e.degree_cap;
    out->lambda_re = e.lambda.real();
    out->lambda_im = e.lambda.imag();
    out->mu_re = e.mu.real();
    out->mu_im = e.mu.imag();
    out->epsilon_re = e.epsilon.real();
    out->epsilon_im = e.epsilon.imag();
    out->r_re = e.r.real();
    out->r_im = e.r.imag();
    out->defect = e.defect;
    out->hecke_defect = e.hecke_defect;
    out->min_root_modulus = e.min_root_modulus;
    out->exact_degree_two = e.exact_degree_two ? (*e.exact_degree_two ? 1 : 0) : -1;
    out->roots_ok = e.roots_ok ? 1 : 0;
    for (std::size_t j = 0; j < e.inverse.size() && j < 7; ++j) {
      out->inverse_re[j] = e.inverse[j].real();
      out->inverse_im[j] = e.inverse[j].imag();
    }
    return LCONV_OK;
  });
}

lconv_status lconv_suite_run(const char* config_text, char** json_out, int* all_pass) {
  if (!json_out) return fail(LCONV_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto cfg = converse::parse_config_text(config_text ? config_text : "");
    const auto rep = converse::run_suite(cfg);
    *json_out = dup_string(converse::report_to_json(rep));
    if (all_pass) *all_pass = rep.all_pass() ? 1 : 0;
    return LCONV_OK;
  });
}

lconv_status lconv_list_forms(char** json_out) {
  if (!json_out) return fail(LCONV_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *json_out = dup_string(converse::forms_to_json(converse::bundled_forms()));
    return LCONV_OK;
  });
}

lconv_status lconv_report_schema(char** json_out) {
  if (!json_out) return fail(LCONV_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *json_out = dup_string(converse::report_schema_json());
    return LCONV_OK;
  });
}

void lconv_string_free(char* s) { std::free(s); }

}  // extern "C"
