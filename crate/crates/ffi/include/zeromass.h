#ifndef ZEROMASS_H
#define ZEROMASS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Number of doubles written by the operator functions.
 */
#define ZM_MATRIX_DOUBLES 32

typedef enum ZmStatus {
  ZM_STATUS_OK = 0,
  ZM_STATUS_NULL_POINTER = 1,
  ZM_STATUS_INVALID_ARGUMENT = 2,
  ZM_STATUS_UNKNOWN_SUITE = 3,
  ZM_STATUS_IO = 4,
  ZM_STATUS_COMPUTATION = 5,
  ZM_STATUS_PANIC = 6,
} ZmStatus;

/*
 Opaque run configuration.
 */
typedef struct ZmConfig ZmConfig;

/*
 Opaque completed run.
 */
typedef struct ZmRun ZmRun;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread; empty after a success.
 The pointer stays valid until the next zeromass call on this thread.
 */
const char *zm_last_error(void);

struct ZmConfig *zm_config_new(void);

/*
 # Safety
 `cfg` must be null or a pointer from `zm_config_new`/`zm_config_load_file`
 not yet freed.
 */
void zm_config_free(struct ZmConfig *cfg);

/*
 # Safety
 `cfg` must be a live config handle.
 */
enum ZmStatus zm_config_set_seed(struct ZmConfig *cfg, uint64_t seed);

/*
 # Safety
 `cfg` must be a live config handle.
 */
enum ZmStatus zm_config_set_samples(struct ZmConfig *cfg, size_t samples);

/*
 # Safety
 `cfg` must be a live config handle.
 */
enum ZmStatus zm_config_set_tolerances(struct ZmConfig *cfg,
                                       double tol_exact,
                                       double tol_fd,
                                       double fd_step);

/*
 # Safety
 `cfg` must be a live config handle.
 */
enum ZmStatus zm_config_set_momentum_range(struct ZmConfig *cfg, double min, double max);

/*
 Empty the suite selection; add suites back with `zm_config_add_suite`.

 # Safety
 `cfg` must be a live config handle.
 */
enum ZmStatus zm_config_clear_suites(struct ZmConfig *cfg);

/*
 # Safety
 `cfg` must be a live config handle and `name` a NUL-terminated string.
 */
enum ZmStatus zm_config_add_suite(struct ZmConfig *cfg, const char *name);

/*
 Parse a flat `key = value` file into a new handle stored in `*out`.

 # Safety
 `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ZmStatus zm_config_load_file(const char *path, struct ZmConfig **out);

/*
 Run the configured suites. A run whose checks fail still returns
 `Ok` with a handle; query it with `zm_run_exit_code`.

 # Safety
 `cfg` must be a live config handle and `out` a valid pointer.
 */
enum ZmStatus zm_run(const struct ZmConfig *cfg, struct ZmRun **out);

/*
 0 when every check matched its expectation, 1 otherwise, -1 for null.

 # Safety
 `run` must be null or a live run handle.
 */
int32_t zm_run_exit_code(const struct ZmRun *run);

/*
 JSON report; release with `zm_string_free`.

 # Safety
 `run` must be a live run handle.
 */
char *zm_run_json(const struct ZmRun *run);

/*
 Markdown report; release with `zm_string_free`.

 # Safety
 `run` must be a live run handle.
 */
char *zm_run_markdown(const struct ZmRun *run);

/*
 # Safety
 `s` must be null or a string returned by this library, not yet freed.
 */
void zm_string_free(char *s);

/*
 # Safety
 `run` must be null or a live run handle.
 */
void zm_run_free(struct ZmRun *run);

/*
 `H(p) = α·p`.

 # Safety
 `p` must point to 3 doubles and `out` to 32.
 */
enum ZmStatus zm_hamiltonian(const double *p, double *out);

/*
 `ε̂ = H/|p|`.

 # Safety
 `p` must point to 3 doubles and `out` to 32.
 */
enum ZmStatus zm_energy_sign(const double *p, double *out);

/*
 `Λ̂ = iγ4ε̂`.

 # Safety
 `p` must point to 3 doubles and `out` to 32.
 */
enum ZmStatus zm_helicity(const double *p, double *out);

/*
 `Pa^sign(p)` for family 1 (chirality), 2 (helicity) or 3 (energy sign).

 # Safety
 `p` must point to 3 doubles and `out` to 32.
 */
enum ZmStatus zm_projector(uint8_t family, int32_t sign, const double *p, double *out);

/*
 Rank-1 joint projector onto energy sign `eps` and helicity `lam`.

 # Safety
 `p` must point to 3 doubles and `out` to 32.
 */
enum ZmStatus zm_minimal_projector(int32_t eps, int32_t lam, const double *p, double *out);

/*
 Unitary `W(p)` with `W H W† = γ0|p|`.

 # Safety
 `p` must point to 3 doubles and `out` to 32.
 */
enum ZmStatus zm_fw_rotation(const double *p, double *out);

/*
 `γ_mu` for `mu` in 0..=3, or `γ4` for `mu = 4`.

 # Safety
 `out` must point to 32 doubles.
 */
enum ZmStatus zm_gamma(uint32_t mu, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZEROMASS_H */
