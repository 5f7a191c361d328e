/* dgbar: bar constructions of augmented dg-algebras over Q, exactly.
 *
 * C interface of the shared library. All functions return a status code;
 * textual results and diagnostics come back in dgbar_buf objects owned by
 * the caller. Handles are opaque; every object allocated by the library is
 * released with the matching _free function.
 */
#ifndef DGBAR_H
#define DGBAR_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct dgbar_algebra dgbar_algebra;
typedef struct dgbar_buf dgbar_buf;

typedef enum {
    DGBAR_OK = 0,
    DGBAR_REFUSED = 1,     /* mathematical refusal or validation failure */
    DGBAR_PARSE_ERROR = 2, /* malformed input file */
    DGBAR_USAGE_ERROR = 3  /* bad arguments */
} dgbar_status;

const char* dgbar_version(void);

/* Parse an algebra description (see FORMATS.md). On failure *out stays NULL
 * and *diag carries the diagnostic. On success *diag is NULL. */
dgbar_status dgbar_algebra_parse(const char* text, size_t len, dgbar_algebra** out,
                                 dgbar_buf** diag);
void dgbar_algebra_free(dgbar_algebra* a);

/* Validation report; DGBAR_OK when all invariants hold. */
dgbar_status dgbar_validate(const dgbar_algebra* a, dgbar_buf** report);

/* Cohomology table of the reduced bar complex.
 * weight_bound >= 0 selects the weighted pipeline (cap must be < 0);
 * cap >= 0 selects the wordlength-capped pipeline. A window is required for
 * capped free-algebra runs; pass has_window = 0 to use the natural window. */
dgbar_status dgbar_bar_table(const dgbar_algebra* a, int weight_bound, int cap,
                             int has_window, int window_lo, int window_hi, int jobs,
                             dgbar_buf** out);

/* Cohomology table of the level-n Cech model (tensor powers of the bar). */
dgbar_status dgbar_cech_table(const dgbar_algebra* a, int level, int weight_bound, int cap,
                              int has_window, int window_lo, int window_hi, int jobs,
                              dgbar_buf** out);

/* Table of the truncated bar complex; mode 0 = tau_{<=bound}, 1 = tau_{>=bound}. */
dgbar_status dgbar_truncate_table(const dgbar_algebra* a, int mode, int bound,
                                  int weight_bound, int cap, int has_window, int window_lo,
                                  int window_hi, int jobs, dgbar_buf** out);

/* Moore-complex oracle diff: compares the normalized bar table against the
 * comonadic Moore total complex through the given simplicial level, and the
 * normalized quotient against the Moore complex. *match is 1 on agreement. */
dgbar_status dgbar_oracle_diff(const dgbar_algebra* a, int levels, int jobs, dgbar_buf** out,
                               int* match);

/* Connectivity gate report (PASS/FAIL plus the per-weight table). */
dgbar_status dgbar_connectivity(const dgbar_algebra* a, int weight_bound, dgbar_buf** out);

/* Coarse moduli: H^0 Hopf algebra dump with a hopf_validate report appended.
 * Refuses non-connective weighted inputs unless force is nonzero. */
dgbar_status dgbar_coarse(const dgbar_algebra* a, int weight_bound, int cap, int force,
                          int jobs, dgbar_buf** out);

const char* dgbar_buf_data(const dgbar_buf* b);
size_t dgbar_buf_size(const dgbar_buf* b);
void dgbar_buf_free(dgbar_buf* b);

#ifdef __cplusplus
}
#endif

#endif
