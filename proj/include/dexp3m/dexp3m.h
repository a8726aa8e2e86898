/* C interface to the DEXP3.M library: opaque handles, status codes,
 * no C++ types across the boundary. */
#ifndef DEXP3M_H
#define DEXP3M_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define DXM_API __declspec(dllexport)
#else
#define DXM_API __attribute__((visibility("default")))
#endif

typedef enum dxm_status {
  DXM_OK = 0,
  DXM_ERR_ARG = 1,       /* bad argument / null pointer */
  DXM_ERR_CONFIG = 2,    /* invalid or missing configuration */
  DXM_ERR_INVARIANT = 3, /* runtime invariant breach */
  DXM_ERR_IO = 4         /* file read/write failure */
} dxm_status;

/* Message for the last failing call on this thread. */
DXM_API const char* dxm_last_error(void);

DXM_API const char* dxm_version(void);

/* ---- experiment configs ------------------------------------------------ */

typedef struct dxm_config dxm_config;

DXM_API dxm_status dxm_config_load(const char* path, dxm_config** out);
DXM_API void dxm_config_free(dxm_config* cfg);

/* Writes a one-line parameter summary into buf (truncated to cap). */
DXM_API dxm_status dxm_validate(const dxm_config* cfg, char* buf, size_t cap);

/* Runs every seed and writes regret.csv / diagnostics.csv / summary.csv
 * plus run_meta.txt. out_dir overrides the config's output directory when
 * non-NULL. */
DXM_API dxm_status dxm_run(const dxm_config* cfg, const char* out_dir);

/* Runs the configured sweep axis; adds scaling.csv. */
DXM_API dxm_status dxm_sweep(const dxm_config* cfg, const char* out_dir);

/* ---- virtual-slot diagnostics ------------------------------------------ */

/* Fills t_of_tau / l_before / s_tilde (each of length t_horizon) with the
 * real-to-virtual slot mapping for the given per-round delays. */
DXM_API dxm_status dxm_virtual_slot_map(const int32_t* delays, int32_t t_horizon,
                                        int32_t d_bar, int32_t* t_of_tau,
                                        int64_t* l_before, int64_t* s_tilde);

/* ---- incremental policy handle ----------------------------------------- */

typedef struct dxm_policy dxm_policy;

/* Parameters follow the horizon schedule for (K, k, d_bar, T, D). */
DXM_API dxm_status dxm_policy_create(int32_t K, int32_t k, int32_t d_bar,
                                     int64_t T, int64_t D, uint64_t seed,
                                     dxm_policy** out);
DXM_API void dxm_policy_free(dxm_policy* p);

/* Samples k distinct arms into arms_out (length k), ascending. */
DXM_API dxm_status dxm_policy_select(dxm_policy* p, int32_t* arms_out);

/* Applies one delivered feedback item: n observed (arm, loss) pairs. */
DXM_API dxm_status dxm_policy_update(dxm_policy* p, const int32_t* arms,
                                     const double* losses, int32_t n);

/* Marks the end of the current round (no-op on the distribution). */
DXM_API dxm_status dxm_policy_next_round(dxm_policy* p);

/* Copies the current K-vector of play probabilities. */
DXM_API dxm_status dxm_policy_probs(const dxm_policy* p, double* probs_out);

DXM_API dxm_status dxm_policy_round(const dxm_policy* p, int32_t* round_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DEXP3M_H */
