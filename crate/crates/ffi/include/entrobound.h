#ifndef ENTROBOUND_H
#define ENTROBOUND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum EntroboundStatus {
  ENTROBOUND_STATUS_OK = 0,
  ENTROBOUND_STATUS_NULL_POINTER = 1,
  ENTROBOUND_STATUS_INVALID_ARGUMENT = 2,
  // An object failed its validator (not PSD, incomplete, not normalized...).
  ENTROBOUND_STATUS_VALIDATION = 3,
  // A numerical routine could not produce a result.
  ENTROBOUND_STATUS_NUMERIC = 4,
  ENTROBOUND_STATUS_PARSE = 5,
  ENTROBOUND_STATUS_IO = 6,
  ENTROBOUND_STATUS_BUFFER_TOO_SMALL = 7,
  ENTROBOUND_STATUS_PANIC = 8,
} EntroboundStatus;

typedef struct EntroboundDilation EntroboundDilation;

typedef struct EntroboundMeasurement EntroboundMeasurement;

typedef struct EntroboundState EntroboundState;

// Conjugate-order pair check on one state.
typedef struct EntroboundPairCheck {
  double alpha;
  double beta;
  double entropy_alpha;
  double entropy_beta;
  // `f(M,N|rho)`
  double f;
  // `fbar(M,N)`
  double f_bar;
  // `H_alpha + H_beta + 2 ln f`
  double slack_state_dependent;
  // `H_alpha + H_beta + 2 ln fbar`
  double slack_state_independent;
  // Both relations and `f <= fbar` hold within `1e-9`.
  int passed;
} EntroboundPairCheck;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer is
// valid until the next call into the library on the same thread.
const char *entrobound_last_error(void);

// Library version as a static NUL-terminated string.
const char *entrobound_version(void);

// Builds a measurement from `outcomes` consecutive `dim x dim` complex
// matrices (`outcomes * dim * dim * 2` doubles). `projective` nonzero
// additionally requires orthogonal projectors.
enum EntroboundStatus entrobound_measurement_new(const double *elements,
                                                 uintptr_t dim,
                                                 uintptr_t outcomes,
                                                 int projective,
                                                 struct EntroboundMeasurement **out);

void entrobound_measurement_free(struct EntroboundMeasurement *m);

// Dimension of the measured system, or 0 for NULL.
uintptr_t entrobound_measurement_dim(const struct EntroboundMeasurement *m);

uintptr_t entrobound_measurement_outcomes(const struct EntroboundMeasurement *m);

// Pure state from `dim` complex amplitudes; the norm must be 1 within 1e-10.
enum EntroboundStatus entrobound_state_pure(const double *amplitudes,
                                            uintptr_t dim,
                                            struct EntroboundState **out);

// Density matrix from a `dim x dim` complex matrix.
enum EntroboundStatus entrobound_state_mixed(const double *matrix,
                                             uintptr_t dim,
                                             struct EntroboundState **out);

void entrobound_state_free(struct EntroboundState *s);

// Rényi entropy of order `alpha` (`INFINITY` for the min-entropy) of a
// probability vector.
enum EntroboundStatus entrobound_renyi_entropy(const double *p,
                                               uintptr_t len,
                                               double alpha,
                                               double *out);

// Writes `tr(M_i rho)` for every outcome into `out` (`len` at least the
// outcome count).
enum EntroboundStatus entrobound_probabilities(const struct EntroboundMeasurement *m,
                                               const struct EntroboundState *state,
                                               double *out,
                                               uintptr_t len);

enum EntroboundStatus entrobound_f_bar(const struct EntroboundMeasurement *m,
                                       const struct EntroboundMeasurement *n,
                                       double *out);

enum EntroboundStatus entrobound_f_mixed(const struct EntroboundMeasurement *m,
                                         const struct EntroboundMeasurement *n,
                                         const struct EntroboundState *state,
                                         double *out);

enum EntroboundStatus entrobound_phi(const struct EntroboundMeasurement *m,
                                     const struct EntroboundState *state,
                                     double *out);

enum EntroboundStatus entrobound_phi_bar(const struct EntroboundMeasurement *m, double *out);

// Pair relations at order `alpha` (> 1/2, finite) and its conjugate.
enum EntroboundStatus entrobound_check_pair(const struct EntroboundMeasurement *m,
                                            const struct EntroboundMeasurement *n,
                                            const struct EntroboundState *state,
                                            double alpha,
                                            struct EntroboundPairCheck *out);

enum EntroboundStatus entrobound_dilate(const struct EntroboundMeasurement *m,
                                        struct EntroboundDilation **out);

void entrobound_dilation_free(struct EntroboundDilation *d);

// Dimension of the enlarged space, or 0 for NULL.
uintptr_t entrobound_dilation_dim(const struct EntroboundDilation *d);

// Copies projector `index` (`D x D` complex, `2 D^2` doubles) into `out`.
enum EntroboundStatus entrobound_dilation_projector(const struct EntroboundDilation *d,
                                                    uintptr_t index,
                                                    double *out,
                                                    uintptr_t len);

// Runs every dilation invariant on `state` (its support eigenvectors when
// mixed). `companion` may be NULL for the computational basis. Writes the
// largest residual and whether all invariants hold within 1e-9.
enum EntroboundStatus entrobound_dilation_verify(const struct EntroboundDilation *d,
                                                 const struct EntroboundMeasurement *companion,
                                                 const struct EntroboundState *state,
                                                 double *max_residual,
                                                 int *passed);

// Runs the built-in two-state discrimination suite; `passed` receives 1
// when every check holds.
enum EntroboundStatus entrobound_builtin_regression(int *passed);

// Runs a campaign from a JSON config (fields as in the CLI `--config`
// file; omitted fields take defaults) and returns the JSON report, to be
// released with [`entrobound_string_free`].
enum EntroboundStatus entrobound_campaign_json(const char *config_json, char **out);

// Validates a scenario given as JSON text, runs its checks, and returns the
// JSON report, to be released with [`entrobound_string_free`].
enum EntroboundStatus entrobound_verify_json(const char *scenario_json, char **out);

void entrobound_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTROBOUND_H */
