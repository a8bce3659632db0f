#ifndef TDBEM_H
#define TDBEM_H

/* C interface to the time-domain boundary element solver. All functions
 * return TDBEM_OK on success; on failure tdbem_last_error() describes the
 * problem for the calling thread. */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    TDBEM_OK = 0,
    TDBEM_ERR_INVALID_ARGUMENT = 1,
    TDBEM_ERR_IO = 2,
    TDBEM_ERR_SOLVER = 3
} tdbem_status;

/* Opaque experiment configuration handle. */
typedef struct tdbem_config tdbem_config;

tdbem_config* tdbem_config_create(void);
void tdbem_config_destroy(tdbem_config* cfg);

/* Loads a flat key = value configuration file into cfg. */
tdbem_status tdbem_config_load(tdbem_config* cfg, const char* path);

/* Sets a single configuration key (same keys as the file format). */
tdbem_status tdbem_config_set(tdbem_config* cfg, const char* key, const char* value);

/* Spatial convergence study; CSV written to out_csv. */
tdbem_status tdbem_run_spatial(const tdbem_config* cfg, const char* out_csv);

/* Temporal convergence study against the benchmark time step. */
tdbem_status tdbem_run_time(const tdbem_config* cfg, const char* out_csv);

/* Estimator efficiency ratios e/(estimate + C tau^p). */
tdbem_status tdbem_run_efficiency(const tdbem_config* cfg, double C, double p,
                                  const char* out_csv);

/* Density and field snapshot files at the given times, in the configured
 * output directory. */
tdbem_status tdbem_emit_snapshots(const tdbem_config* cfg, const double* times, int n_times);

/* Message of the last failure on this thread ("" if none). */
const char* tdbem_last_error(void);

#ifdef __cplusplus
}
#endif

#endif
