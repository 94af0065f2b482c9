#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "suds/geometry.hpp"

namespace suds {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class SudsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, malformed configuration, or out-of-range shape.
class ConfigError : public SudsError {
 public:
  using SudsError::SudsError;
};

/// The group block of the Pfaffian constraint is numerically singular.
class SingularConstraint : public SudsError {
 public:
  using SudsError::SudsError;
};

/// The passive-block solve matrix lost positive definiteness (modeling bug).
class NonDissipative : public SudsError {
 public:
  using SudsError::SudsError;
};

class DegenerateOscillation : public SudsError {
 public:
  using SudsError::SudsError;
};

class IllConditioned : public SudsError {
 public:
  using SudsError::SudsError;
};

class InsufficientCoverage : public SudsError {
 public:
  using SudsError::SudsError;
};

class DimensionMismatch : public SudsError {
 public:
  using SudsError::SudsError;
};

class DegenerateTemplate : public SudsError {
 public:
  using SudsError::SudsError;
};

class IoError : public SudsError {
 public:
  using SudsError::SudsError;
};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Shape-space bookkeeping: n = n_a + n_p, group_dim is 1 (x-line) or 3 (SE(2)).
struct Dimensions {
  int n_a = 0;
  int n_p = 0;
  int n = 0;
  int group_dim = 0;
};

/// Shape coordinates and velocities split into actuated and passive blocks.
struct ShapeState {
  VectorXd r_a;
  VectorXd r_p;
  VectorXd rdot_a;
  VectorXd rdot_p;
};

/// Local connection A and the Pfaffian blocks it came from: the total drag
/// wrench on the body vanishes, omega_g * ghat + omega_r * rdot = 0, so
/// A = -omega_g^{-1} omega_r.
struct ConnectionEval {
  MatrixXd A;        // group_dim x n
  MatrixXd omega_g;  // group_dim x group_dim
  MatrixXd omega_r;  // group_dim x n
};

/// Shape-space drag metric: internal wrenches are tau = -M(r) * rdot.
struct ShapeMetric {
  MatrixXd M;    // n x n, symmetric positive definite
  MatrixXd Maa;  // actuated x actuated
  MatrixXd Map;  // actuated x passive
  MatrixXd Mpa;  // passive x actuated
  MatrixXd Mpp;  // passive x passive
};

/// Spring/damper acting on each passive coordinate (applied-wrench convention:
/// the element exerts f = f_o + F*rdot with f_o = -k(r_p - r_rest) and -d on
/// the passive diagonal of F).
struct PassiveElementSet {
  VectorXd k;       // >= 0, one per passive coordinate
  VectorXd r_rest;  // rest value per passive coordinate
  VectorXd d;       // >= 0, damping per passive coordinate
};

/// Applied passive wrench embedded in full shape coordinates.
struct PassiveForce {
  VectorXd f_o;  // length n, zero on actuated rows
  MatrixXd F;    // n x n, -d on passive diagonal, zero elsewhere
};

/// Result of the quasi-static force balance: (ghat, rdot_p) = C_tilde + B * rdot_a.
struct SudsVelocity {
  BodyVelocity ghat;
  VectorXd rdot_p;
  VectorXd C_tilde;  // length group_dim + n_p
  MatrixXd B;        // (group_dim + n_p) x n_a
};

// ---------------------------------------------------------------------------
// System interface
// ---------------------------------------------------------------------------

/// A simulatable shape-underactuated dissipative system: exposes the local
/// connection A(r), the shape metric M(r), and its passive elements, so that
/// (ghat, rdot_p) is solvable from (r, rdot_a).
///
/// Immutable after construction; all evaluation methods are const and
/// thread-safe.
class SudsSystem {
 public:
  virtual ~SudsSystem() = default;

  const Dimensions& dims() const { return dims_; }
  const std::vector<int>& actuated_indices() const { return actuated_; }
  const std::vector<int>& passive_indices() const { return passive_; }
  const PassiveElementSet& passive_elements() const { return elements_; }
  const std::string& name() const { return name_; }

  /// Pfaffian blocks and A(r) at a full shape vector (length n).
  ConnectionEval connection(const VectorXd& r) const;

  /// Drag metric at a full shape vector, with blocks by the a/p split.
  ShapeMetric shape_metric(const VectorXd& r) const;

  /// Connection and metric in one pass (link chains share the drag assembly).
  void evaluate(const VectorXd& r, ConnectionEval* conn, ShapeMetric* metric) const;

  /// Reject shapes outside the system's admissible range (throws ConfigError).
  virtual void validate_shape(const VectorXd& r) const;

  /// Assemble a full shape vector / velocity from the split state.
  VectorXd assemble(const VectorXd& values_a, const VectorXd& values_p) const;
  void split(const VectorXd& full, VectorXd* out_a, VectorXd* out_p) const;

 protected:
  /// Either output may be null; closed-form systems fill them independently,
  /// link chains share one drag assembly.
  virtual void eval(const VectorXd& r, ConnectionEval* conn, ShapeMetric* metric) const = 0;

  void init(std::string name, int n, int group_dim, std::vector<int> actuated,
            PassiveElementSet elements);
  void fill_blocks(ShapeMetric* metric) const;

  Dimensions dims_;
  std::vector<int> actuated_;
  std::vector<int> passive_;
  PassiveElementSet elements_;
  std::string name_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Applied spring/damper wrench of the system's passive elements at a state,
/// embedded in full shape rows.
PassiveForce passive_force(const PassiveElementSet& elements, const SudsSystem& system,
                           const ShapeState& state);

/// Solve the quasi-static force balance for (ghat, rdot_p) given rdot_a, and
/// report the affine pieces C_tilde, B.  Throws SingularConstraint or
/// NonDissipative.
SudsVelocity suds_velocity(const SudsSystem& system, const ShapeState& state,
                           const VectorXd& rdot_a);

/// Drag wrench on the actuated rows, tau_a = -M_ap rdot_p - M_aa rdot_a, with
/// rdot_p taken from the force balance.
VectorXd actuated_torque(const SudsSystem& system, const ShapeState& state,
                         const VectorXd& rdot_a);

/// ShapeState helpers.
ShapeState make_state(const SudsSystem& system, const VectorXd& r_full,
                      const VectorXd& rdot_full = VectorXd());

}  // namespace suds
