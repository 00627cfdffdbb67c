#ifndef GIC_H
#define GIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GicStatus {
  GIC_STATUS_OK = 0,
  GIC_STATUS_NULL_POINTER = 1,
  GIC_STATUS_INVALID_PARAMETER = 2,
  GIC_STATUS_UNSUPPORTED = 3,
  GIC_STATUS_NO_CERTIFICATE = 4,
  GIC_STATUS_NUMERICAL = 5,
  GIC_STATUS_UNKNOWN_VARIABLE = 6,
  GIC_STATUS_INTERNAL = 7,
} GicStatus;

typedef enum GicRegime {
  GIC_REGIME_LOW_INTERFERENCE_EXACT = 0,
  GIC_REGIME_ABOVE_THRESHOLD = 1,
} GicRegime;

/**
 * Opaque channel handle.
 */
typedef struct GicChannel GicChannel;

/**
 * Opaque handle to a block of seeded samples.
 */
typedef struct GicSampleBatch GicSampleBatch;

/**
 * Every bound at once. `has_*` is 1 when the matching value is defined.
 */
typedef struct GicBounds {
  double tin_lower;
  uint8_t has_ortho_lower;
  double ortho_lower;
  uint8_t has_onebit_upper;
  double onebit_upper;
  uint8_t has_kramer_upper;
  double kramer_upper;
  uint8_t has_tangent_upper;
  double tangent_upper;
  uint8_t has_exact_capacity;
  double exact_capacity;
  uint8_t has_genie_upper;
  double genie_upper;
  int32_t regime;
  double condition_value;
  double threshold;
} GicBounds;

typedef struct GicGenie {
  double eta1;
  double rho1;
  double eta2;
  double rho2;
} GicGenie;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread; empty after a success.
 * The pointer stays valid until the next `gic_*` call on the same thread.
 */
const char *gic_last_error(void);

/**
 * Linear power for a value in dB.
 */
double gic_db_to_linear(double x_db);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum GicStatus gic_channel_new(double p1,
                               double p2,
                               double h12,
                               double h21,
                               struct GicChannel **out);

/**
 * # Safety
 * `channel` must be null or a handle from [`gic_channel_new`] not yet freed.
 */
void gic_channel_free(struct GicChannel *channel);

/**
 * # Safety
 * `channel` must be a live handle and `out` valid for writes.
 */
enum GicStatus gic_bounds(const struct GicChannel *channel, struct GicBounds *out);

/**
 * Builds the low-interference genie. Returns `GIC_STATUS_NO_CERTIFICATE`
 * above the threshold or when a cross gain is zero.
 *
 * # Safety
 * `channel` must be a live handle and `out` valid for writes.
 */
enum GicStatus gic_genie_construct(const struct GicChannel *channel, struct GicGenie *out);

/**
 * Sum-rate upper bound certified by a useful genie.
 *
 * # Safety
 * `channel` and `genie` must be valid pointers and `out` valid for writes.
 */
enum GicStatus gic_genie_aided_sum_rate(const struct GicChannel *channel,
                                        const struct GicGenie *genie,
                                        double *out);

/**
 * Tangent-line upper bound for a symmetric channel. `genie` may be null;
 * otherwise it receives the genie that achieves the bound.
 *
 * # Safety
 * `channel` must be a live handle, `rate` valid for writes, `genie` null or
 * valid for writes.
 */
enum GicStatus gic_tangent_bound(const struct GicChannel *channel,
                                 double *rate,
                                 struct GicGenie *genie);

/**
 * Draws `n` seeded samples. `genie` may be null to omit side information.
 *
 * # Safety
 * `channel` must be a live handle, `genie` null or valid, `out` valid for writes.
 */
enum GicStatus gic_sample_new(const struct GicChannel *channel,
                              const struct GicGenie *genie,
                              size_t n,
                              uint64_t seed,
                              struct GicSampleBatch **out);

/**
 * Borrows one column (`"X1"`, `"Y1"`, `"S1"`, ...). The data stays valid
 * until the batch is freed.
 *
 * # Safety
 * `batch` must be a live handle, `name` a NUL-terminated string, `data` and
 * `len` valid for writes.
 */
enum GicStatus gic_sample_column(const struct GicSampleBatch *batch,
                                 const char *name,
                                 const double **data,
                                 size_t *len);

/**
 * # Safety
 * `batch` must be null or a handle from [`gic_sample_new`] not yet freed.
 */
void gic_sample_free(struct GicSampleBatch *batch);

/**
 * Symmetric sweep over `h` as CSV text, same layout as the `gic sweep`
 * command. Release the string with [`gic_string_free`].
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum GicStatus gic_sweep_csv(double p, double h_from, double h_to, double h_step, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void gic_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GIC_H */
