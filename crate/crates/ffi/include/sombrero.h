#ifndef SOMBRERO_H
#define SOMBRERO_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define SMB_OK 0

#define SMB_ERR_PARAM 1

#define SMB_ERR_NUMERIC 2

#define SMB_ERR_NULL 3

#define SMB_ERR_PANIC 4

#define SMB_TRIAL_ONE 1

#define SMB_TRIAL_TWO 2

#define SMB_METHOD_F 0

#define SMB_METHOD_TAU 1

#define SMB_RC_AUTO -1

#define SMB_RC_ZERO 0

#define SMB_RC_INFINITY 1

#define SMB_ROOT_LARGER 0

#define SMB_ROOT_SMALLER 1

/*
 Opaque solve result.
 */
typedef struct SmbResult SmbResult;

/*
 Solver settings. Obtain defaults from `smb_default_options`.
 */
typedef struct SmbOptions {
  /*
   Maximum iteration order.
   */
  uint32_t orders;
  /*
   Stop when |E_n - E_{n-1}| < tol.
   */
  double tol;
  /*
   Odd grid point count.
   */
  size_t n_points;
  /*
   Grid cutoff; <= 0 selects it automatically.
   */
  double r_max;
  /*
   One of SMB_RC_*.
   */
  int32_t r_c;
  /*
   One of SMB_ROOT_*.
   */
  int32_t root;
  /*
   Prefactor parameter used when trial II falls back to revised mode.
   */
  double revised_a;
} SmbOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Default solver settings.
 */
struct SmbOptions smb_default_options(void);

/*
 Solves for the ground state. On success `*out` receives a handle owned
 by the caller. `opts` may be null for defaults. Non-convergence is not
 an error; query `smb_result_converged`.

 # Safety
 `out` must be valid for writes; `opts` must be null or point to an
 initialized `SmbOptions`.
 */
int32_t smb_solve(uint32_t dim,
                  double g,
                  double a,
                  int32_t trial,
                  int32_t method,
                  const struct SmbOptions *opts,
                  struct SmbResult **out);

/*
 Releases a handle from `smb_solve`. Null is ignored.

 # Safety
 `res` must be null or a handle not yet freed.
 */
void smb_result_free(struct SmbResult *res);

/*
 Number of energies E0..En, 0 for a null handle.

 # Safety
 `res` must be null or a live handle.
 */
size_t smb_result_energy_count(const struct SmbResult *res);

/*
 Copies up to `len` energies into `buf`.

 # Safety
 `res` must be null or a live handle; `buf` must hold `len` doubles.
 */
int32_t smb_result_energies(const struct SmbResult *res, double *buf, size_t len);

/*
 Last energy of the sequence, NaN for a null handle.

 # Safety
 `res` must be null or a live handle.
 */
double smb_result_final_energy(const struct SmbResult *res);

/*
 1 if converged, 0 if not, -1 for a null handle.

 # Safety
 `res` must be null or a live handle.
 */
int32_t smb_result_converged(const struct SmbResult *res);

/*
 Number of grid nodes, 0 for a null handle.

 # Safety
 `res` must be null or a live handle.
 */
size_t smb_result_len(const struct SmbResult *res);

/*
 Copies up to `len` nodes and peak-normalized ψ values. Either output
 pointer may be null to skip it.

 # Safety
 `res` must be null or a live handle; non-null buffers hold `len` doubles.
 */
int32_t smb_result_psi(const struct SmbResult *res, double *r_out, double *psi_out, size_t len);

/*
 V(r); NaN when the parameters are out of domain.
 */
double smb_potential(uint32_t dim, double g, double a, double r);

/*
 Finite-difference ground-state energy. `r_max <= 0` and `n == 0` select
 the defaults.

 # Safety
 `out` must be valid for writes.
 */
int32_t smb_oracle_energy(uint32_t dim, double g, double a, double r_max, size_t n, double *out);

/*
 Message of the last failure on this thread, or null. The pointer stays
 valid until the next failing call on the same thread.
 */
const char *smb_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SOMBRERO_H */
