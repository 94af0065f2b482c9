#pragma once

#include <optional>
#include <string>
#include <vector>

#include "suds/phase.hpp"

namespace suds {

/// Feature layout for the per-phase affine regression:
/// [1, delta (n), deltadot_a (n_a), vec(delta (x) deltadot_a) (n * n_a)],
/// outer-product block row-major in (delta index, deltadot_a index).
int regressor_count(int n, int n_a);
VectorXd build_regressors(const VectorXd& delta, const VectorXd& deltadot_a);

struct FitConfig {
  int bins = 64;
  double bandwidth = 2.0 * M_PI / 16.0;  // wrapped-Gaussian kernel width
  double ridge = 1e-8;                   // relative to the top singular value squared
  double min_mass_factor = 3.0;          // per-bin weight mass >= factor * features
  double rank_tol_factor = 1e3;          // deficient when s_min/s_max < factor * ridge
  double weak_column_tol = 1e-3;         // relative weighted column norm
};

/// Per-phase-bin affine model of (ghat, rdot_p) in the deviation coordinates.
/// Coefficients are solved by wrapped-Gaussian-weighted ridge least squares at
/// each bin center, jointly for all output rows.
struct SudsModel {
  FitConfig config;
  Dimensions dims;
  std::vector<int> actuated;
  VectorXd centers;              // bin centers in [0, 2pi)
  std::vector<MatrixXd> coeffs;  // per bin: features x (group_dim + n_p)
  NominalGait nominal;

  // Fit diagnostics.
  VectorXd mass;                        // kernel weight mass per bin
  MatrixXd residual_rms;                // bins x outputs, weighted
  std::vector<bool> rank_deficient;     // per bin
  std::vector<std::vector<int>> weak_columns;  // per bin, feature indices

  int features() const { return regressor_count(dims.n, dims.n_a); }
  int outputs() const { return dims.group_dim + dims.n_p; }

  /// Coefficient blocks at a bin: offset C, shape gain C_r, drive gain B,
  /// interaction gain B_r (rows = outputs).
  VectorXd C(int bin) const;
  MatrixXd C_r(int bin) const;
  MatrixXd B(int bin) const;
  MatrixXd B_r(int bin) const;
};

SudsModel fit(const DeviationSet& data, const NominalGait& nominal,
              const FitConfig& config = {});

/// Evaluate the model at phase phi (coefficients interpolated periodically
/// between adjacent bin centers): returns stacked (ghat, rdot_p).
VectorXd predict(const SudsModel& model, double phi, const VectorXd& delta,
                 const VectorXd& deltadot_a);

/// Phase-only template prediction: the phase-averaged (ghat, rdot_p).
VectorXd template_predict(const NominalGait& nominal, double phi);

/// Prediction accuracy relative to the template, per quantity group:
/// Gamma = 1 - sum|data-driven error| / sum|template error|.
struct EvaluationReport {
  double gamma_ghat = 0.0;
  double gamma_rdot = 0.0;
  std::vector<std::optional<double>> gamma_component;  // per output component
  double err_data_ghat = 0.0, err_template_ghat = 0.0;
  double err_data_rdot = 0.0, err_template_rdot = 0.0;
  int m = 0;  // sample count
  // Residual series for plotting: phi, then |e_D| and |e_T| per component.
  VectorXd phi;
  MatrixXd resid_data;      // m x outputs, signed
  MatrixXd resid_template;  // m x outputs, signed
};

EvaluationReport evaluate(const SudsModel& model, const NominalGait& nominal,
                          const DeviationSet& test);

/// Convenience: phases + deviations of a raw trajectory through the nominal's
/// phase map, then evaluate.
EvaluationReport evaluate_trajectory(const SudsModel& model, const NominalGait& nominal,
                                     const Trajectory& test);

DeviationSet deviations_for(const NominalGait& nominal, const Trajectory& traj);

void save_model(const SudsModel& model, const std::string& path);
SudsModel load_model(const std::string& path);
void save_report(const EvaluationReport& report, const std::string& json_path,
                 const std::string& residuals_csv_path);

/// Fit diagnostics only: feature count, per-bin weight mass, residual RMS,
/// rank flags.
void save_fit_report(const SudsModel& model, const std::string& path);

}  // namespace suds
