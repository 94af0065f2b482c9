#pragma once

#include <string>

#include "suds/simulate.hpp"
#include "suds/system.hpp"

namespace suds {

/// Fitted shape-to-phase map: protophase is the angle in the plane of the
/// first two (whitened) principal components of the mean-subtracted shape
/// series, then uniformized by the empirical distribution of its residue so
/// the phase advances at a constant average rate.  The distribution is
/// carried by its first few Fourier coefficients, which keeps the map smooth
/// and strictly monotone.  Fit once on training data, applicable to any
/// series from the same gait.
struct PhaseMap {
  VectorXd mean;       // n
  MatrixXd projection; // n x 2, columns give the whitened scores
  double orient = 1.0; // +-1, chosen so phase increases along the fit series
  VectorXd uni_a;      // cos coefficients of the residue density, k = 1..K
  VectorXd uni_b;      // sin coefficients

  /// Uniformizing transformation of a protophase residue in [0, 2pi):
  /// the integrated truncated density, fixed at 0 -> 0 and 2pi -> 2pi.
  double uniformize(double residue) const;

  /// Unwrapped uniformized phase for each row of a shape series.
  VectorXd apply(const MatrixXd& shapes) const;
};

/// Per-sample unwrapped phase plus summary rate.
struct PhaseSeries {
  VectorXd phi;           // radians, unwrapped
  double mean_rate = 0.0; // rad/s
  bool flipped = false;   // protophase orientation was reversed
};

/// Fit a phase map to a shape series (rows are samples) and evaluate it on
/// that series.  dt is the sample spacing.  Throws DegenerateOscillation when
/// the planar embedding collapses, ConfigError when fewer than five cycles
/// are present.
PhaseSeries estimate_phase(const MatrixXd& shapes, double dt, PhaseMap* map_out = nullptr);

/// Truncated Fourier series per output channel: column layout
/// [a0, a1, b1, ..., aK, bK] against [1, cos(phi), sin(phi), ...].
struct FourierSeries {
  int order = 0;
  MatrixXd coeff;  // channels x (1 + 2*order)

  VectorXd eval(double phi) const;
  VectorXd deriv(double phi) const;  // d/dphi
};

/// Phase-indexed nominal gait: Fourier averages of the shape, the body
/// velocity, and the passive shape velocity, anchored to the phase map that
/// produced them.
struct NominalGait {
  int order = 0;
  double base_freq = 0.0;  // rad/s
  Dimensions dims;
  std::vector<int> actuated;
  FourierSeries shape;     // n channels
  FourierSeries ghat;      // group_dim channels
  FourierSeries rdot_p;    // n_p channels
  PhaseMap map;
  VectorXd residual_rms;   // per fitted channel: shape, ghat, rdot_p

  VectorXd theta(double phi) const { return shape.eval(phi); }
  VectorXd theta_dot(double phi) const { return shape.deriv(phi) * base_freq; }
};

/// Least-squares Fourier fit of order K in phase, jointly over shape, body
/// velocity, and passive velocity channels.  Throws IllConditioned when the
/// design matrix condition number exceeds 1e8.
NominalGait fit_nominal(const Trajectory& traj, const PhaseSeries& phases, int order);

/// Deviation coordinates for every sample of a trajectory against a nominal
/// gait: delta = r - theta(phi), deltadot = rdot - theta_dot(phi).
struct DeviationSet {
  Dimensions dims;
  std::vector<int> actuated;
  VectorXd phi;          // N
  MatrixXd delta;        // N x n
  MatrixXd deltadot;     // N x n
  MatrixXd deltadot_a;   // N x n_a
  MatrixXd targets;      // N x (group_dim + n_p): ghat then rdot_p

  int samples() const { return static_cast<int>(phi.size()); }
};

DeviationSet deviations(const Trajectory& traj, const NominalGait& nominal,
                        const PhaseSeries& phases);

/// JSON persistence (includes the phase map so the nominal can be applied to
/// new trajectories).
void save_nominal(const NominalGait& nominal, const std::string& path);
NominalGait load_nominal(const std::string& path);

}  // namespace suds
