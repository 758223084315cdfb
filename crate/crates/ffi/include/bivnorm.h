#ifndef BIVNORM_H
#define BIVNORM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// `rho = 2 Phi(r) - 1`
#define BIVNORM_RHO_CORRECTED 0

// `rho = 2 Phi(r) - 0.5`
#define BIVNORM_RHO_PAPER 1

// Result code of every fallible entry point.
typedef enum BivnormStatus {
  BIVNORM_STATUS_OK = 0,
  // Correlation outside `[-1, 1]`.
  BIVNORM_STATUS_DOMAIN = 1,
  BIVNORM_STATUS_NULL_POINTER = 2,
  BIVNORM_STATUS_INVALID_ARGUMENT = 3,
  // The oracle could not certify its accuracy target.
  BIVNORM_STATUS_ACCURACY = 4,
  BIVNORM_STATUS_IO = 5,
  BIVNORM_STATUS_OUT_OF_RANGE = 6,
  // A Rust panic was caught at the boundary.
  BIVNORM_STATUS_PANIC = 7,
} BivnormStatus;

// Opaque profiling result.
typedef struct BivnormProfile BivnormProfile;

// Opaque profiling configuration.
typedef struct BivnormProfileConfig BivnormProfileConfig;

// One bucket of a profile.
typedef struct BivnormBucketStats {
  uint64_t n;
  double x_center;
  double q99_abs_err;
  double max_abs_err;
  double max_x;
  double max_y;
  double max_rho;
  uint64_t evaluated;
} BivnormBucketStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code. Never NULL.
const char *bivnorm_status_string(int status);

// Message for the last failure on this thread, or NULL if there was none.
// The pointer stays valid until the next failing call on the same thread.
const char *bivnorm_last_error_message(void);

double bivnorm_density(double x);

double bivnorm_cdf(double x);

// `Phi2(x, x; 1 - a)` for `x <= 0`, `0 <= a <= 1` with caller-supplied
// `px = Phi(x)` and `pxs = Phi(lambda x)`.
double bivnorm_phi2_diagonal(double x, double a, double px, double pxs);

// `Phi2(x, y; rho)` written to `*out`.
//
// # Safety
// `out` must be NULL or valid for a write of one `double`.
enum BivnormStatus bivnorm_phi2(double x, double y, double rho, double *out);

// `Phi2(x, x; rho)` for any `x` and `rho` in `[-1, 1]`, written to `*out`.
//
// # Safety
// `out` must be NULL or valid for a write of one `double`.
enum BivnormStatus bivnorm_phi2_on_diagonal(double x, double rho, double *out);

// Oracle value as the unevaluated sum `*hi + *lo`.
//
// # Safety
// `hi` and `lo` must be NULL or each valid for a write of one `double`.
enum BivnormStatus bivnorm_oracle(double x, double y, double rho, double *hi, double *lo);

// New configuration with the defaults (201 buckets, 10^4 samples, seed 42).
// Release with [`bivnorm_profile_config_free`].
struct BivnormProfileConfig *bivnorm_profile_config_new(void);

// # Safety
// `config` must be NULL or a handle from [`bivnorm_profile_config_new`] not yet freed.
void bivnorm_profile_config_free(struct BivnormProfileConfig *config);

// # Safety
// `config` must be NULL or a live configuration handle.
enum BivnormStatus bivnorm_profile_config_set_buckets(struct BivnormProfileConfig *config,
                                                      size_t buckets);

// # Safety
// `config` must be NULL or a live configuration handle.
enum BivnormStatus bivnorm_profile_config_set_samples(struct BivnormProfileConfig *config,
                                                      size_t samples_per_bucket);

// # Safety
// `config` must be NULL or a live configuration handle.
enum BivnormStatus bivnorm_profile_config_set_seed(struct BivnormProfileConfig *config,
                                                   uint64_t seed);

// `threads == 0` selects the global pool.
//
// # Safety
// `config` must be NULL or a live configuration handle.
enum BivnormStatus bivnorm_profile_config_set_threads(struct BivnormProfileConfig *config,
                                                      size_t threads);

// `formula` is [`BIVNORM_RHO_CORRECTED`] or [`BIVNORM_RHO_PAPER`].
//
// # Safety
// `config` must be NULL or a live configuration handle.
enum BivnormStatus bivnorm_profile_config_set_rho_formula(struct BivnormProfileConfig *config,
                                                          int formula);

// Runs the study; on success `*out` receives a handle to release with
// [`bivnorm_profile_free`].
//
// # Safety
// `config` must be NULL or a live configuration handle; `out` must be NULL or
// valid for a pointer write.
enum BivnormStatus bivnorm_profile_run(const struct BivnormProfileConfig *config,
                                       struct BivnormProfile **out);

// Number of buckets, 0 for NULL.
//
// # Safety
// `profile` must be NULL or a live profile handle.
size_t bivnorm_profile_len(const struct BivnormProfile *profile);

// # Safety
// `profile` must be NULL or a live profile handle; `out` must be NULL or
// valid for a write of one `BivnormBucketStats`.
enum BivnormStatus bivnorm_profile_bucket(const struct BivnormProfile *profile,
                                          size_t index,
                                          struct BivnormBucketStats *out);

// Writes the profile CSV to the UTF-8 path `path`.
//
// # Safety
// `profile` must be NULL or a live profile handle; `path` must be NULL or a
// NUL-terminated string.
enum BivnormStatus bivnorm_profile_write_csv(const struct BivnormProfile *profile,
                                             const char *path);

// # Safety
// `profile` must be NULL or a handle from [`bivnorm_profile_run`] not yet freed.
void bivnorm_profile_free(struct BivnormProfile *profile);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIVNORM_H */
