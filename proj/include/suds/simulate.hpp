#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include "suds/swimmers.hpp"
#include "suds/system.hpp"

namespace suds {

/// Per-actuated-joint sinusoidal reference: offset + amplitude * sin(freq * (t - lag)).
struct GaitSpec {
  VectorXd offset;     // n_a
  VectorXd amplitude;  // n_a
  VectorXd lag;        // seconds, n_a
  double freq = 2.0 * M_PI;  // rad/s

  double period() const { return 2.0 * M_PI / freq; }
};

/// Reference waveform and its analytic time derivative.
std::pair<VectorXd, VectorXd> reference(const GaitSpec& spec, double t);

/// Ornstein-Uhlenbeck drive perturbation: exponentially attracted to zero,
/// diffused by Brownian noise.
struct NoiseSpec {
  double lambda = 5.0;  // attraction rate, 1/s
  double sigma = 0.0;   // diffusion, units/sqrt(s)
  std::uint64_t seed = 0;
};

/// One Euler-Maruyama step of d(delta) = -lambda * delta dt + sigma dW.
VectorXd ou_step(const VectorXd& delta_a, double dt, const NoiseSpec& noise,
                 std::mt19937_64& rng);

struct TrajectoryMeta {
  SwimmerParams params;
  GaitSpec gait;
  NoiseSpec noise;
  Dimensions dims;
  std::vector<int> actuated;
  int n_cycles = 0;
  int samples_per_cycle = 0;
  int warmup_cycles = 0;
  double dt = 0.0;
  std::string system_name;
};

/// Uniformly sampled trial records; one row per sample.
struct Trajectory {
  TrajectoryMeta meta;
  VectorXd t;         // N
  MatrixXd g;         // N x 3: x, y, theta
  MatrixXd ghat;      // N x 3: vx, vy, wz (body frame)
  MatrixXd r;         // N x n
  MatrixXd rdot;      // N x n
  MatrixXd r_ref;     // N x n_a
  MatrixXd rdot_ref;  // N x n_a

  int samples() const { return static_cast<int>(t.size()); }
};

struct SimOptions {
  int warmup_cycles = 2;
  GroupElement g0;
  VectorXd r_p0;  // defaults to the passive rest values
};

/// Drive the system along the noise-perturbed gait and record every sample.
/// Integration: the OU deviation is frozen within each step, the passive
/// shape advances by classical RK4, and the pose by a fourth-order
/// Munthe-Kaas step (exactly equivariant under the initial pose).
Trajectory simulate_trial(const SudsSystem& system, const GaitSpec& gait,
                          const NoiseSpec& noise, int n_cycles, int samples_per_cycle,
                          const SimOptions& options = {});

/// CSV trajectory with JSON metadata sidecar; doubles at full precision so
/// that a round-trip is bit-exact.
void save_trajectory(const Trajectory& traj, const std::string& csv_path,
                     const std::string& meta_path);
Trajectory load_trajectory(const std::string& csv_path, const std::string& meta_path);

/// Net group displacement per cycle and the RMS drive deviation from the
/// reference (trial summary numbers).
struct TrajectoryStats {
  double net_x_per_cycle = 0.0;
  double deviation_std = 0.0;
};
TrajectoryStats trajectory_stats(const Trajectory& traj);

}  // namespace suds
