#include "suds/suds.h"

#include <cstring>
#include <string>

#include "suds/config.hpp"
#include "suds/phase.hpp"
#include "suds/simulate.hpp"
#include "suds/swimmers.hpp"
#include "suds/sysid.hpp"
#include "suds/system.hpp"

struct suds_system {
  std::unique_ptr<suds::SudsSystem> impl;
  suds::SystemConfig config;
};

struct suds_trajectory {
  suds::Trajectory impl;
};

struct suds_nominal {
  suds::NominalGait impl;
};

struct suds_model {
  suds::SudsModel impl;
};

struct suds_report {
  suds::EvaluationReport impl;
};

namespace {

thread_local std::string g_last_error;

suds_status fail(suds_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
suds_status wrap(Fn&& fn) {
  try {
    return fn();
  } catch (const suds::ConfigError& e) {
    return fail(SUDS_ERR_CONFIG, e.what());
  } catch (const suds::IoError& e) {
    return fail(SUDS_ERR_IO, e.what());
  } catch (const suds::SingularConstraint& e) {
    return fail(SUDS_ERR_SINGULAR, e.what());
  } catch (const suds::NonDissipative& e) {
    return fail(SUDS_ERR_NON_DISSIPATIVE, e.what());
  } catch (const suds::DegenerateOscillation& e) {
    return fail(SUDS_ERR_DEGENERATE_OSCILLATION, e.what());
  } catch (const suds::IllConditioned& e) {
    return fail(SUDS_ERR_ILL_CONDITIONED, e.what());
  } catch (const suds::InsufficientCoverage& e) {
    return fail(SUDS_ERR_INSUFFICIENT_COVERAGE, e.what());
  } catch (const suds::DimensionMismatch& e) {
    return fail(SUDS_ERR_DIMENSION, e.what());
  } catch (const suds::DegenerateTemplate& e) {
    return fail(SUDS_ERR_DEGENERATE_TEMPLATE, e.what());
  } catch (const std::exception& e) {
    return fail(SUDS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SUDS_ERR_INTERNAL, "unknown error");
  }
}

suds_status make_system_handle(suds::SystemConfig cfg, suds_system** out) {
  auto handle = std::make_unique<suds_system>();
  handle->impl = suds::make_system(cfg.params);
  handle->config = std::move(cfg);
  *out = handle.release();
  return SUDS_OK;
}

}  // namespace

extern "C" {

const char* suds_version(void) { return "0.1.0"; }

const char* suds_last_error(void) { return g_last_error.c_str(); }

suds_status suds_system_open(const char* config_path, suds_system** out) {
  if (!config_path || !out) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&] { return make_system_handle(suds::load_system_config(config_path), out); });
}

suds_status suds_system_parse(const char* config_text, suds_system** out) {
  if (!config_text || !out) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&] { return make_system_handle(suds::parse_system_config(config_text), out); });
}

suds_status suds_system_preset(const char* name, suds_system** out) {
  if (!name || !out) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&] { return make_system_handle(suds::preset_config(name), out); });
}

void suds_system_free(suds_system* sys) { delete sys; }

suds_status suds_system_dims(const suds_system* sys, int32_t* n, int32_t* n_a, int32_t* n_p,
                             int32_t* group_dim) {
  if (!sys) return fail(SUDS_ERR_INVALID_ARG, "null system");
  const suds::Dimensions& d = sys->impl->dims();
  if (n) *n = d.n;
  if (n_a) *n_a = d.n_a;
  if (n_p) *n_p = d.n_p;
  if (group_dim) *group_dim = d.group_dim;
  return SUDS_OK;
}

suds_status suds_system_connection(const suds_system* sys, const double* r, int32_t n,
                                   double* a_out) {
  if (!sys || !r || !a_out) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&]() -> suds_status {
    if (n != sys->impl->dims().n) throw suds::DimensionMismatch("shape length != n");
    const suds::ConnectionEval conn =
        sys->impl->connection(Eigen::Map<const suds::VectorXd>(r, n));
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        a_out, conn.A.rows(), conn.A.cols()) = conn.A;
    return SUDS_OK;
  });
}

suds_status suds_system_metric(const suds_system* sys, const double* r, int32_t n,
                               double* m_out) {
  if (!sys || !r || !m_out) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&]() -> suds_status {
    if (n != sys->impl->dims().n) throw suds::DimensionMismatch("shape length != n");
    const suds::ShapeMetric metric =
        sys->impl->shape_metric(Eigen::Map<const suds::VectorXd>(r, n));
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        m_out, n, n) = metric.M;
    return SUDS_OK;
  });
}

suds_status suds_system_velocity(const suds_system* sys, const double* r, int32_t n,
                                 const double* rdot_a, int32_t n_a, double ghat_out[3],
                                 double* rdot_p_out) {
  if (!sys || !r || !rdot_a) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&]() -> suds_status {
    const suds::Dimensions& d = sys->impl->dims();
    if (n != d.n || n_a != d.n_a) throw suds::DimensionMismatch("velocity query dims");
    const suds::ShapeState st =
        suds::make_state(*sys->impl, Eigen::Map<const suds::VectorXd>(r, n));
    const suds::SudsVelocity v =
        suds::suds_velocity(*sys->impl, st, Eigen::Map<const suds::VectorXd>(rdot_a, n_a));
    if (ghat_out) {
      ghat_out[0] = v.ghat.vx;
      ghat_out[1] = v.ghat.vy;
      ghat_out[2] = v.ghat.omega_z;
    }
    if (rdot_p_out && d.n_p > 0)
      Eigen::Map<suds::VectorXd>(rdot_p_out, d.n_p) = v.rdot_p;
    return SUDS_OK;
  });
}

suds_status suds_system_actuated_torque(const suds_system* sys, const double* r, int32_t n,
                                        const double* rdot_a, int32_t n_a, double* tau_out) {
  if (!sys || !r || !rdot_a || !tau_out) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&]() -> suds_status {
    const suds::Dimensions& d = sys->impl->dims();
    if (n != d.n || n_a != d.n_a) throw suds::DimensionMismatch("torque query dims");
    const suds::ShapeState st =
        suds::make_state(*sys->impl, Eigen::Map<const suds::VectorXd>(r, n));
    const suds::VectorXd tau =
        suds::actuated_torque(*sys->impl, st, Eigen::Map<const suds::VectorXd>(rdot_a, n_a));
    Eigen::Map<suds::VectorXd>(tau_out, n_a) = tau;
    return SUDS_OK;
  });
}

void suds_sim_params_init(suds_sim_params* params) {
  if (!params) return;
  params->cycles = 30;
  params->samples_per_cycle = 100;
  params->warmup_cycles = 2;
  params->seed = 0;
  params->sigma = -1.0;
  params->lambda = 0.0;
}

suds_status suds_simulate(const suds_system* sys, const suds_sim_params* params,
                          suds_trajectory** out) {
  if (!sys || !params || !out) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&]() -> suds_status {
    suds::NoiseSpec noise;
    noise.lambda = params->lambda > 0.0 ? params->lambda : sys->config.noise_lambda;
    noise.sigma = params->sigma >= 0.0 ? params->sigma : sys->config.noise_sigma;
    noise.seed = params->seed;
    suds::SimOptions opt;
    opt.warmup_cycles = params->warmup_cycles;
    auto handle = std::make_unique<suds_trajectory>();
    handle->impl = suds::simulate_trial(*sys->impl, sys->config.gait, noise, params->cycles,
                                        params->samples_per_cycle, opt);
    handle->impl.meta.params = sys->config.params;
    *out = handle.release();
    return SUDS_OK;
  });
}

void suds_trajectory_free(suds_trajectory* traj) { delete traj; }

suds_status suds_trajectory_save(const suds_trajectory* traj, const char* csv_path,
                                 const char* meta_json_path) {
  if (!traj || !csv_path || !meta_json_path) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&]() -> suds_status {
    suds::save_trajectory(traj->impl, csv_path, meta_json_path);
    return SUDS_OK;
  });
}

suds_status suds_trajectory_open(const char* csv_path, const char* meta_json_path,
                                 suds_trajectory** out) {
  if (!csv_path || !meta_json_path || !out) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&]() -> suds_status {
    auto handle = std::make_unique<suds_trajectory>();
    handle->impl = suds::load_trajectory(csv_path, meta_json_path);
    *out = handle.release();
    return SUDS_OK;
  });
}

suds_status suds_trajectory_info(const suds_trajectory* traj, int32_t* samples, int32_t* n,
                                 int32_t* n_a, int32_t* group_dim, double* dt) {
  if (!traj) return fail(SUDS_ERR_INVALID_ARG, "null trajectory");
  if (samples) *samples = traj->impl.samples();
  if (n) *n = traj->impl.meta.dims.n;
  if (n_a) *n_a = traj->impl.meta.dims.n_a;
  if (group_dim) *group_dim = traj->impl.meta.dims.group_dim;
  if (dt) *dt = traj->impl.meta.dt;
  return SUDS_OK;
}

suds_status suds_trajectory_stats(const suds_trajectory* traj, double* net_x_per_cycle,
                                  double* deviation_std) {
  if (!traj) return fail(SUDS_ERR_INVALID_ARG, "null trajectory");
  const suds::TrajectoryStats s = suds::trajectory_stats(traj->impl);
  if (net_x_per_cycle) *net_x_per_cycle = s.net_x_per_cycle;
  if (deviation_std) *deviation_std = s.deviation_std;
  return SUDS_OK;
}

void suds_fit_params_init(suds_fit_params* params) {
  if (!params) return;
  params->fourier_order = 7;
  params->bins = 64;
  params->bandwidth = 2.0 * M_PI / 16.0;
  params->ridge = 1e-8;
}

suds_status suds_fit(const suds_trajectory* train, const suds_fit_params* params,
                     suds_model** model_out, suds_nominal** nominal_out) {
  if (!train || !params || !model_out) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&]() -> suds_status {
    suds::PhaseMap map;
    const suds::PhaseSeries phases =
        suds::estimate_phase(train->impl.r, train->impl.meta.dt, &map);
    suds::NominalGait nominal =
        suds::fit_nominal(train->impl, phases, params->fourier_order);
    nominal.map = map;
    const suds::DeviationSet dev = suds::deviations(train->impl, nominal, phases);
    suds::FitConfig cfg;
    cfg.bins = params->bins;
    cfg.bandwidth = params->bandwidth;
    cfg.ridge = params->ridge;
    auto model = std::make_unique<suds_model>();
    model->impl = suds::fit(dev, nominal, cfg);
    if (nominal_out) {
      auto nom = std::make_unique<suds_nominal>();
      nom->impl = std::move(nominal);
      *nominal_out = nom.release();
    }
    *model_out = model.release();
    return SUDS_OK;
  });
}

void suds_model_free(suds_model* model) { delete model; }
void suds_nominal_free(suds_nominal* nominal) { delete nominal; }

suds_status suds_model_save(const suds_model* model, const char* json_path) {
  if (!model || !json_path) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&]() -> suds_status {
    suds::save_model(model->impl, json_path);
    return SUDS_OK;
  });
}

suds_status suds_model_open(const char* json_path, suds_model** out) {
  if (!json_path || !out) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&]() -> suds_status {
    auto handle = std::make_unique<suds_model>();
    handle->impl = suds::load_model(json_path);
    *out = handle.release();
    return SUDS_OK;
  });
}

suds_status suds_nominal_save(const suds_nominal* nominal, const char* json_path) {
  if (!nominal || !json_path) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&]() -> suds_status {
    suds::save_nominal(nominal->impl, json_path);
    return SUDS_OK;
  });
}

suds_status suds_nominal_open(const char* json_path, suds_nominal** out) {
  if (!json_path || !out) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&]() -> suds_status {
    auto handle = std::make_unique<suds_nominal>();
    handle->impl = suds::load_nominal(json_path);
    *out = handle.release();
    return SUDS_OK;
  });
}

suds_status suds_model_feature_count(const suds_model* model, int32_t* out) {
  if (!model || !out) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  *out = model->impl.features();
  return SUDS_OK;
}

suds_status suds_model_bins(const suds_model* model, int32_t* out) {
  if (!model || !out) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  *out = model->impl.config.bins;
  return SUDS_OK;
}

suds_status suds_model_save_fit_report(const suds_model* model, const char* json_path) {
  if (!model || !json_path) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&]() -> suds_status {
    suds::save_fit_report(model->impl, json_path);
    return SUDS_OK;
  });
}

suds_status suds_model_max_residual_rms(const suds_model* model, double* out) {
  if (!model || !out) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  *out = model->impl.residual_rms.size() ? model->impl.residual_rms.maxCoeff() : 0.0;
  return SUDS_OK;
}

suds_status suds_model_predict(const suds_model* model, double phi, const double* delta,
                               int32_t n, const double* deltadot_a, int32_t n_a,
                               double* out) {
  if (!model || !delta || !deltadot_a || !out)
    return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&]() -> suds_status {
    if (n != model->impl.dims.n || n_a != model->impl.dims.n_a)
      throw suds::DimensionMismatch("predict dims mismatch");
    const suds::VectorXd y =
        suds::predict(model->impl, phi, Eigen::Map<const suds::VectorXd>(delta, n),
                      Eigen::Map<const suds::VectorXd>(deltadot_a, n_a));
    Eigen::Map<suds::VectorXd>(out, y.size()) = y;
    return SUDS_OK;
  });
}

suds_status suds_nominal_predict(const suds_nominal* nominal, double phi, double* out) {
  if (!nominal || !out) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&]() -> suds_status {
    const suds::VectorXd y = suds::template_predict(nominal->impl, phi);
    Eigen::Map<suds::VectorXd>(out, y.size()) = y;
    return SUDS_OK;
  });
}

suds_status suds_evaluate(const suds_model* model, const suds_nominal* nominal,
                          const suds_trajectory* test, suds_report** out) {
  if (!model || !nominal || !test || !out) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&]() -> suds_status {
    auto handle = std::make_unique<suds_report>();
    handle->impl = suds::evaluate_trajectory(model->impl, nominal->impl, test->impl);
    *out = handle.release();
    return SUDS_OK;
  });
}

void suds_report_free(suds_report* report) { delete report; }

suds_status suds_report_gammas(const suds_report* report, double* gamma_ghat,
                               double* gamma_rdot) {
  if (!report) return fail(SUDS_ERR_INVALID_ARG, "null report");
  if (gamma_ghat) *gamma_ghat = report->impl.gamma_ghat;
  if (gamma_rdot) *gamma_rdot = report->impl.gamma_rdot;
  return SUDS_OK;
}

suds_status suds_report_save(const suds_report* report, const char* json_path,
                             const char* residuals_csv_path) {
  if (!report || !json_path) return fail(SUDS_ERR_INVALID_ARG, "null argument");
  return wrap([&]() -> suds_status {
    suds::save_report(report->impl, json_path,
                      residuals_csv_path ? residuals_csv_path : "");
    return SUDS_OK;
  });
}

}  // extern "C"
