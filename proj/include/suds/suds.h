/*
 * C interface to the SUDS toolkit: simulation of shape-underactuated
 * dissipative swimmers and per-phase affine system identification.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return SUDS_OK (0) on success; on failure they return an error
 * code and suds_last_error() describes what went wrong (per thread).
 */
#ifndef SUDS_SUDS_H_
#define SUDS_SUDS_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum suds_status {
  SUDS_OK = 0,
  SUDS_ERR_INVALID_ARG = 1,
  SUDS_ERR_CONFIG = 2,
  SUDS_ERR_IO = 3,
  SUDS_ERR_SINGULAR = 4,
  SUDS_ERR_NON_DISSIPATIVE = 5,
  SUDS_ERR_DEGENERATE_OSCILLATION = 6,
  SUDS_ERR_ILL_CONDITIONED = 7,
  SUDS_ERR_INSUFFICIENT_COVERAGE = 8,
  SUDS_ERR_DIMENSION = 9,
  SUDS_ERR_DEGENERATE_TEMPLATE = 10,
  SUDS_ERR_INTERNAL = 11
} suds_status;

typedef struct suds_system suds_system;
typedef struct suds_trajectory suds_trajectory;
typedef struct suds_nominal suds_nominal;
typedef struct suds_model suds_model;
typedef struct suds_report suds_report;

const char* suds_version(void);

/* Message for the most recent failure on this thread. */
const char* suds_last_error(void);

/* ------------------------------------------------------------------------ */
/* Systems                                                                   */
/* ------------------------------------------------------------------------ */

/* Load a system definition from a key/value config file, from config text,
 * or from a built-in preset (linear_passive, pushmepullyou, purcell3,
 * purcell9). */
suds_status suds_system_open(const char* config_path, suds_system** out);
suds_status suds_system_parse(const char* config_text, suds_system** out);
suds_status suds_system_preset(const char* name, suds_system** out);
void suds_system_free(suds_system* sys);

suds_status suds_system_dims(const suds_system* sys, int32_t* n, int32_t* n_a,
                             int32_t* n_p, int32_t* group_dim);

/* Local connection A(r), row-major group_dim x n. */
suds_status suds_system_connection(const suds_system* sys, const double* r, int32_t n,
                                   double* a_out);

/* Shape metric M(r), row-major n x n. */
suds_status suds_system_metric(const suds_system* sys, const double* r, int32_t n,
                               double* m_out);

/* Quasi-static force balance: body velocity (vx, vy, wz) and passive rates
 * from shape r and actuated rate rdot_a. */
suds_status suds_system_velocity(const suds_system* sys, const double* r, int32_t n,
                                 const double* rdot_a, int32_t n_a, double ghat_out[3],
                                 double* rdot_p_out);

/* Drag wrench on the actuated coordinates at (r, rdot_a). */
suds_status suds_system_actuated_torque(const suds_system* sys, const double* r, int32_t n,
                                        const double* rdot_a, int32_t n_a, double* tau_out);

/* ------------------------------------------------------------------------ */
/* Simulation                                                                */
/* ------------------------------------------------------------------------ */

typedef struct suds_sim_params {
  int32_t cycles;            /* recorded cycles */
  int32_t samples_per_cycle; /* default 100 */
  int32_t warmup_cycles;     /* discarded before recording, default 2 */
  uint64_t seed;
  double sigma;  /* < 0 keeps the system config default */
  double lambda; /* <= 0 keeps the system config default */
} suds_sim_params;

void suds_sim_params_init(suds_sim_params* params);

suds_status suds_simulate(const suds_system* sys, const suds_sim_params* params,
                          suds_trajectory** out);
void suds_trajectory_free(suds_trajectory* traj);

suds_status suds_trajectory_save(const suds_trajectory* traj, const char* csv_path,
                                 const char* meta_json_path);
suds_status suds_trajectory_open(const char* csv_path, const char* meta_json_path,
                                 suds_trajectory** out);
suds_status suds_trajectory_info(const suds_trajectory* traj, int32_t* samples, int32_t* n,
                                 int32_t* n_a, int32_t* group_dim, double* dt);
/* Net x displacement per cycle and RMS drive deviation from the reference. */
suds_status suds_trajectory_stats(const suds_trajectory* traj, double* net_x_per_cycle,
                                  double* deviation_std);

/* ------------------------------------------------------------------------ */
/* Identification                                                            */
/* ------------------------------------------------------------------------ */

typedef struct suds_fit_params {
  int32_t fourier_order; /* nominal gait order, default 7 */
  int32_t bins;          /* phase bins, default 64 */
  double bandwidth;      /* kernel width, default 2*pi/16 */
  double ridge;          /* default 1e-8 */
} suds_fit_params;

void suds_fit_params_init(suds_fit_params* params);

/* Phase estimation, nominal gait, and the per-phase affine regression in one
 * pass over a training trajectory. */
suds_status suds_fit(const suds_trajectory* train, const suds_fit_params* params,
                     suds_model** model_out, suds_nominal** nominal_out);
void suds_model_free(suds_model* model);
void suds_nominal_free(suds_nominal* nominal);

suds_status suds_model_save(const suds_model* model, const char* json_path);
suds_status suds_model_open(const char* json_path, suds_model** out);
suds_status suds_nominal_save(const suds_nominal* nominal, const char* json_path);
suds_status suds_nominal_open(const char* json_path, suds_nominal** out);

suds_status suds_model_feature_count(const suds_model* model, int32_t* out);
suds_status suds_model_bins(const suds_model* model, int32_t* out);

/* Fit diagnostics (feature count, per-bin weight mass and residual RMS, rank
 * flags) as a JSON file. */
suds_status suds_model_save_fit_report(const suds_model* model, const char* json_path);

/* Largest per-bin weighted residual RMS across outputs (fit quality summary). */
suds_status suds_model_max_residual_rms(const suds_model* model, double* out);

/* Data-driven prediction of stacked (ghat, rdot_p); out has length
 * group_dim + n_p. */
suds_status suds_model_predict(const suds_model* model, double phi, const double* delta,
                               int32_t n, const double* deltadot_a, int32_t n_a,
                               double* out);

/* Phase-only template prediction; out has length group_dim + n_p. */
suds_status suds_nominal_predict(const suds_nominal* nominal, double phi, double* out);

/* ------------------------------------------------------------------------ */
/* Evaluation                                                                */
/* ------------------------------------------------------------------------ */

suds_status suds_evaluate(const suds_model* model, const suds_nominal* nominal,
                          const suds_trajectory* test, suds_report** out);
void suds_report_free(suds_report* report);

suds_status suds_report_gammas(const suds_report* report, double* gamma_ghat,
                               double* gamma_rdot);
suds_status suds_report_save(const suds_report* report, const char* json_path,
                             const char* residuals_csv_path);

#ifdef __cplusplus
}
#endif

#endif /* SUDS_SUDS_H_ */
