#ifndef COLORED_CLIQUES_H
#define COLORED_CLIQUES_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum CcStatus {
  CC_STATUS_OK = 0,
  CC_STATUS_NULL_POINTER = 1,
  CC_STATUS_INVALID_ARGUMENT = 2,
  CC_STATUS_DIMENSION_MISMATCH = 3,
  CC_STATUS_BUDGET_EXCEEDED = 4,
  CC_STATUS_PARSE = 5,
  CC_STATUS_NOT_FOUND = 6,
  CC_STATUS_BUFFER_TOO_SMALL = 7,
  CC_STATUS_INTERNAL = 8,
} CcStatus;

/**
 * Weight optimisation method for `cc_optimize_alpha`.
 */
typedef enum CcAlphaMode {
  CC_ALPHA_MODE_SUPPORT_ENUMERATION = 0,
  CC_ALPHA_MODE_REPLICATOR = 1,
} CcAlphaMode;

/**
 * Opaque forbidden family.
 */
typedef struct CcFamily CcFamily;

/**
 * Opaque small graph.
 */
typedef struct CcGraph CcGraph;

/**
 * Opaque color template.
 */
typedef struct CcTemplate CcTemplate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf`; returns the
 * number of bytes needed including the terminating NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t cc_last_error(char *buf, size_t len);

/**
 * Parses a family descriptor such as `dichromatic`, `improper:k=4` or
 * `mono:k=3+rainbow:k=3` over `s` colors.
 *
 * # Safety
 * `desc` must be a NUL-terminated string; `out` must be writable.
 */
enum CcStatus cc_family_parse(const char *desc, size_t s, struct CcFamily **out);

/**
 * # Safety
 * `fam` must be null or a handle from `cc_family_parse` not yet freed.
 */
void cc_family_free(struct CcFamily *fam);

/**
 * Parses a template in the `r=.. s=..` / `i j : c1,c2` text form.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum CcStatus cc_template_parse(const char *text, struct CcTemplate **out);

/**
 * The constant template `[s]` on `r` parts.
 *
 * # Safety
 * `out` must be writable.
 */
enum CcStatus cc_template_full(size_t r, size_t s, struct CcTemplate **out);

/**
 * # Safety
 * `t` must be null or a live template handle.
 */
void cc_template_free(struct CcTemplate *t);

/**
 * Number of parts, or 0 for a null handle.
 *
 * # Safety
 * `t` must be null or a live template handle.
 */
size_t cc_template_parts(const struct CcTemplate *t);

/**
 * Whether the template admits no member of the family.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum CcStatus cc_template_is_free(const struct CcTemplate *t,
                                  const struct CcFamily *fam,
                                  bool *out);

/**
 * Maximises `q(phi, .)`; writes `r` weights to `alpha` (capacity `len`) and the value to `q`.
 *
 * # Safety
 * `alpha` must point to `len` writable doubles; `q` must be writable.
 */
enum CcStatus cc_optimize_alpha(const struct CcTemplate *t,
                                enum CcAlphaMode mode,
                                double *alpha,
                                size_t len,
                                double *q);

/**
 * Parses `K:n`, `turan:r,n` or `bipartite:a,b`.
 *
 * # Safety
 * `desc` must be a NUL-terminated string; `out` must be writable.
 */
enum CcStatus cc_graph_parse(const char *desc, struct CcGraph **out);

/**
 * # Safety
 * `g` must be null or a live graph handle.
 */
void cc_graph_free(struct CcGraph *g);

/**
 * `F(G;X)` as a decimal string in `buf`.
 *
 * # Safety
 * Handles must be live; `buf` must point to `len` writable bytes.
 */
enum CcStatus cc_count_colorings(const struct CcGraph *g,
                                 const struct CcFamily *fam,
                                 uint64_t budget,
                                 char *buf,
                                 size_t len);

/**
 * `g_s(r)`; 0 for `r <= 1`.
 */
double cc_g_value(uint64_t s, uint64_t r);

/**
 * `R_2(s)` when `even`, else `R(s)`. Writes up to `cap` winners and their count.
 *
 * # Safety
 * `winners` must point to `cap` writable integers; `count` must be writable.
 */
enum CcStatus cc_r_set(uint64_t s, bool even, uint64_t *winners, size_t cap, size_t *count);

/**
 * The improper-clique threshold `s(k)`, scanning `s <= s_cap`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CcStatus cc_compute_sk(uint64_t k, uint64_t s_cap, bool exact, uint64_t *out);

/**
 * `Q_t(X)` over `r <= r_max` by exhaustive search; writes the value and the number of optimal templates.
 *
 * # Safety
 * `fam` must be live; `q` and `optima` must be writable.
 */
enum CcStatus cc_brute_force_q(const struct CcFamily *fam,
                               size_t r_max,
                               size_t t,
                               uint64_t budget,
                               double *q,
                               size_t *optima);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COLORED_CLIQUES_H */
