#ifndef LCONV_LCONV_H
#define LCONV_LCONV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LCONV_API __declspec(dllexport)
#else
#define LCONV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lconv_status {
  LCONV_OK = 0,
  LCONV_INVALID_ARGUMENT = 1,
  LCONV_PARSE_ERROR = 2,
  LCONV_INSUFFICIENT_TRUNCATION = 3,
  LCONV_NUMERIC_ERROR = 4,
  LCONV_FUNCTIONAL_EQUATION_ERROR = 5,
  LCONV_IO_ERROR = 6,
  LCONV_INTERNAL_ERROR = 99
} lconv_status;

/* Opaque coefficient series. */
typedef struct lconv_series lconv_series;

typedef struct lconv_series_info {
  uint64_t level;
  unsigned weight;
  size_t length;
  double growth_constant;
  int has_exact_data;
} lconv_series_info;

typedef struct lconv_euler_data {
  uint64_t q;
  unsigned degree_cap;
  double lambda_re, lambda_im;
  double mu_re, mu_im;
  double epsilon_re, epsilon_im;
  double r_re, r_im;
  double defect;
  double hecke_defect;
  double min_root_modulus;
  int exact_degree_two; /* -1 unknown, 0 false, 1 true */
  int roots_ok;
  double inverse_re[7];
  double inverse_im[7];
} lconv_euler_data;

LCONV_API const char* lconv_version(void);

/* Message of the last failed call on this thread ("" when none). */
LCONV_API const char* lconv_last_error(void);

/* Builds a series from a descriptor (delta, 11a, eis:5.4,3.2, eta:..., file:path).
   X = 0 selects the default truncation. */
LCONV_API lconv_status lconv_series_from_form(const char* descriptor, size_t X, lconv_series** out);

/* Loads an n,re,im CSV. N and k of 0 take the header values; X = 0 reads every row.
   n_violations (optional) receives the number of multiplicativity violations. */
LCONV_API lconv_status lconv_series_load_csv(const char* path, uint64_t N, unsigned k, size_t X,
                                             lconv_series** out, size_t* n_violations);

LCONV_API void lconv_series_free(lconv_series* s);

LCONV_API lconv_status lconv_series_info_get(const lconv_series* s, lconv_series_info* info);

/* Normalized coefficient a_n, 1 <= n <= length. */
LCONV_API lconv_status lconv_series_coeff(const lconv_series* s, size_t n, double* re, double* im);

/* New series with a_n shifted by (re + i im). */
LCONV_API lconv_status lconv_series_perturb(const lconv_series* s, size_t n, double re, double im,
                                            lconv_series** out);

/* Local Euler data at prime q with degree cap J (2 <= J <= 6). */
LCONV_API lconv_status lconv_euler_factor(const lconv_series* s, uint64_t q, unsigned J,
                                          lconv_euler_data* out);

/* Runs the verification suite from key = value config text. *json_out receives the
   report (free with lconv_string_free); *all_pass is 1 when nothing failed. */
LCONV_API lconv_status lconv_suite_run(const char* config_text, char** json_out, int* all_pass);

LCONV_API lconv_status lconv_list_forms(char** json_out);
LCONV_API lconv_status lconv_report_schema(char** json_out);
LCONV_API void lconv_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
