/* SPDX-License-Identifier: Apache-2.0
 *
 * clauth: cross-layer authentication simulator for vehicular networks.
 * Public C API. The simulator core is C++; this header is the stable
 * boundary used by the CLI and by external tooling.
 *
 * Conventions:
 *   - objects are opaque handles with create/destroy pairs;
 *   - every run_* call reports a clauth_status and, on success, hands back
 *     a NUL-terminated artifact (CSV or annotated text) that the caller
 *     releases with clauth_string_free();
 *   - on failure clauth_last_error() describes the most recent error in
 *     the calling thread.
 */

#ifndef CLAUTH_H
#define CLAUTH_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum clauth_status {
  CLAUTH_OK = 0,
  CLAUTH_ERR_PARSE = 2,        /* scenario/model/argument syntax */
  CLAUTH_ERR_PRECONDITION = 3, /* violated operation precondition */
  CLAUTH_ERR_NO_PROOF = 4,     /* BAN goals not all derivable */
  CLAUTH_ERR_IO = 5,           /* file access */
  CLAUTH_ERR_INTERNAL = 6,
} clauth_status;

const char* clauth_version(void);
const char* clauth_status_name(clauth_status status);
/* Last error message in this thread; empty string when none. */
const char* clauth_last_error(void);
void clauth_string_free(char* s);

/* --- scenario configuration ------------------------------------------- */

typedef struct clauth_scenario clauth_scenario;

clauth_scenario* clauth_scenario_create(void);
void clauth_scenario_destroy(clauth_scenario* sc);
/* Structured key-value scenario document; parse errors carry line numbers. */
clauth_status clauth_scenario_load_file(clauth_scenario* sc, const char* path);
/* Single `key`/`value` override (same keys as the file format). */
clauth_status clauth_scenario_set(clauth_scenario* sc, const char* key, const char* value);
clauth_status clauth_scenario_dump(const clauth_scenario* sc, char** out_text);

/* --- experiment runners ------------------------------------------------ */

/* ROC sweep: one curve block per (snr, n, ris) combination.
 * snr_list_db: comma-separated dB values, e.g. "0,-3,-6" (must be non-empty)
 * n_list: comma-separated subcarrier counts, e.g. "64,128" (non-empty)
 * ris_mode: "on", "off" or "both"
 * Output CSV columns: tau,p_fa_theory,p_d_theory,p_fa_mc,p_d_mc,trials,seed.
 */
clauth_status clauth_run_roc(const clauth_scenario* sc, const char* snr_list_db,
                             const char* n_list, const char* ris_mode, int trials,
                             int tau_points, unsigned long long seed, int jobs,
                             char** out_csv);

/* Handshake + n re-authentication messages as an annotated hex trace.
 * attack: "none", "replay", "modify" or "impersonate". */
clauth_status clauth_run_protocol_trace(const clauth_scenario* sc, int n_messages,
                                        const char* attack, unsigned long long seed,
                                        char** out_text);

/* Closed-form phase density and hypothesis moments at linear SNR gamma.
 * a1_list: optional comma-separated false-alarm targets for the threshold
 * optimizer ("" for none). */
clauth_status clauth_run_theory(double gamma, unsigned n2, int grid_points,
                                const char* a1_list, char** out_csv);

/* Computation/communication cost comparison table (text or CSV). */
clauth_status clauth_run_cost(unsigned long long n, unsigned long long q, int as_csv,
                              char** out_text);

/* Formal-logic verification: derives the model's goals, reporting the
 * derivation (or the missing goals with CLAUTH_ERR_NO_PROOF; the report is
 * still produced in that case). */
clauth_status clauth_ban_verify_text(const char* model_text, char** out_report);
clauth_status clauth_ban_verify_file(const char* path, char** out_report);
/* Built-in model of the scheme's handshake analysis. */
const char* clauth_ban_builtin_model(void);

#ifdef __cplusplus
}
#endif

#endif /* CLAUTH_H */
