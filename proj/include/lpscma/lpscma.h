#ifndef LPSCMA_H
#define LPSCMA_H

/* Shared-library interface to the sparse-codebook toolkit. All heavy state
 * lives behind the opaque codebook handle; inputs and reports are JSON
 * strings so the surface stays small and language-agnostic. Functions return
 * LPSCMA_OK or an error code; lpscma_last_error() describes the most recent
 * failure on the calling thread. Strings returned through char** outputs are
 * owned by the caller and must be released with lpscma_string_free(). */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct lpscma_codebook lpscma_codebook;

typedef enum {
  LPSCMA_OK = 0,
  LPSCMA_ERR_VALIDATION = 2, /* bad input: config, file contents, parameter ranges */
  LPSCMA_ERR_RUNTIME = 3     /* I/O or numerical failure */
} lpscma_status;

const char* lpscma_version(void);
const char* lpscma_last_error(void);

/* Worker cap for parallel sections; 0 restores the hardware default. */
void lpscma_set_threads(int threads);

void lpscma_string_free(char* s);
void lpscma_codebook_free(lpscma_codebook* cb);

lpscma_status lpscma_codebook_parse(const char* json_text, lpscma_codebook** out);
lpscma_status lpscma_codebook_load(const char* path, lpscma_codebook** out);
lpscma_status lpscma_codebook_serialize(const lpscma_codebook* cb, char** json_out);
lpscma_status lpscma_codebook_save(const lpscma_codebook* cb, const char* path);

/* Run the full construction pipeline. config keys: M, T, overload, kappa,
 * ebn0_db, seed and optional search budgets (restarts, opt_iters, Q, t_max,
 * perm_restarts, perm_budget, label_i_max, label_restarts). The resolved
 * config is embedded in the emitted codebook; the optimizer trace is
 * returned as JSON when trace_json_out is non-null. */
lpscma_status lpscma_design(const char* config_json, lpscma_codebook** out, char** trace_json_out);

/* Re-run bit labeling in place. config keys: kappa, ebn0_db, i_max,
 * restarts, seed. */
lpscma_status lpscma_label(lpscma_codebook* cb, const char* config_json);

/* Distance metric report. config keys: kappa, ebn0_db, mode
 * ("auto"|"exact"|"montecarlo"), Q, t_max, seed, exact_cap. */
lpscma_status lpscma_eval(const lpscma_codebook* cb, const char* config_json, char** report_json_out);

/* Link-level BER sweep, returned as CSV. config keys: ebn0_db (array or
 * "a:b:step" string), kappa (array, "inf" allowed), frames, max_iters, tol,
 * decoder ("mpa"|"lp-mpa"), seed. */
lpscma_status lpscma_simulate(const lpscma_codebook* cb, const char* config_json, char** csv_out);

/* Decoder operation counts and the complexity reduction ratio. config keys:
 * lp {T, d_f, N, J, I_t}, baseline {T, d_f, N, J, I_t}. */
lpscma_status lpscma_complexity(const char* config_json, char** report_json_out);

/* Parse a codebook file and run the structural checks; the report lists any
 * violations instead of failing on the first one. */
lpscma_status lpscma_validate(const char* path, char** report_json_out);

#ifdef __cplusplus
}
#endif

#endif /* LPSCMA_H */
