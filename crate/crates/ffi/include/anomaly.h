#ifndef ANOMALY_H
#define ANOMALY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum AnomalyStatus {
  ANOMALY_STATUS_OK = 0,
  ANOMALY_STATUS_NULL_POINTER = 1,
  ANOMALY_STATUS_INVALID_ARGUMENT = 2,
  // The engine reported an error, see `anomaly_last_error`.
  ANOMALY_STATUS_COMPUTATION = 3,
  // A Rust panic was caught at the boundary.
  ANOMALY_STATUS_PANIC = 4,
} AnomalyStatus;

// A verification report.
typedef struct AnomalyReport AnomalyReport;

// A rational q-series.
typedef struct AnomalySeries AnomalySeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *anomaly_version(void);

// Message of the last failed call on this thread, or NULL. The pointer is
// valid until the next call into the library on the same thread.
const char *anomaly_last_error(void);

// Frees a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void anomaly_string_free(char *s);

// `E4` (`weight` 4) or `E6` (`weight` 6) through `q^n`.
//
// # Safety
// `out` must be a valid pointer to writable storage.
enum AnomalyStatus anomaly_eisenstein(uint32_t weight, uint32_t n, struct AnomalySeries **out);

// `(delta, epsilon)` for `group` 1 (`Gamma_0(2)`) or 2 (`Gamma^0(2)`),
// truncated at `u^order_half`.
//
// # Safety
// `delta_out` and `eps_out` must be valid pointers to writable storage.
enum AnomalyStatus anomaly_delta_eps(uint32_t group,
                                     uint32_t order_half,
                                     struct AnomalySeries **delta_out,
                                     struct AnomalySeries **eps_out);

// Exclusive truncation bound in powers of `q^(1/2)`.
//
// # Safety
// `s` must be a live handle and `out` valid.
enum AnomalyStatus anomaly_series_order(const struct AnomalySeries *s, uint32_t *out);

// Coefficient of `q^(exp_half/2)` as a decimal string such as `-1/8`.
//
// # Safety
// `s` must be a live handle and `out` valid. Free the string with
// `anomaly_string_free`.
enum AnomalyStatus anomaly_series_coeff(const struct AnomalySeries *s,
                                        uint32_t exp_half,
                                        char **out);

// `{"order_half": .., "terms": [[exp, "coeff"], ..]}`.
//
// # Safety
// `s` must be a live handle and `out` valid.
enum AnomalyStatus anomaly_series_to_json(const struct AnomalySeries *s, char **out);

// # Safety
// `s` must come from this library and not be freed twice. NULL is ignored.
void anomaly_series_free(struct AnomalySeries *s);

// Verifies one case. `family` is a name such as `spin_sl2z`; zero
// `order_half` or `rank_n` selects the defaults.
//
// # Safety
// `family` must be a NUL-terminated string and `out` valid.
enum AnomalyStatus anomaly_verify(const char *family,
                                  uint32_t dim,
                                  uint32_t order_half,
                                  uint32_t rank_n,
                                  struct AnomalyReport **out);

// # Safety
// `r` must be a live handle and `out` valid.
enum AnomalyStatus anomaly_report_passed(const struct AnomalyReport *r, bool *out);

// The report as JSON, including `wall_ms`.
//
// # Safety
// `r` must be a live handle and `out` valid.
enum AnomalyStatus anomaly_report_to_json(const struct AnomalyReport *r, char **out);

// # Safety
// `r` must come from this library and not be freed twice. NULL is ignored.
void anomaly_report_free(struct AnomalyReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ANOMALY_H */
