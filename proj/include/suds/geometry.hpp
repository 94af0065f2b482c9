#pragma once

#include <Eigen/Core>

namespace suds {

/// Planar rigid-body pose (x, y, heading), heading wrapped to (-pi, pi].
/// Systems whose position space is the pure x-translation line reuse this
/// type with y == heading == 0.
struct GroupElement {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
};

/// Velocity expressed in the frame rigidly attached to the body.
struct BodyVelocity {
  double vx = 0.0;
  double vy = 0.0;
  double omega_z = 0.0;
};

/// World-frame pose rates (xdot, ydot, thetadot).
struct WorldVelocity {
  double xdot = 0.0;
  double ydot = 0.0;
  double thetadot = 0.0;
};

/// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

GroupElement identity_element();
GroupElement compose(const GroupElement& g1, const GroupElement& g2);
GroupElement inverse(const GroupElement& g);

/// Rotate the translational part of a world velocity into the body frame.
BodyVelocity world_to_body(const GroupElement& g, const WorldVelocity& gdot);
WorldVelocity body_to_world(const GroupElement& g, const BodyVelocity& xi);

/// Closed-form exponential of a twist (dt * xi), as a group element.
GroupElement se2_exp(const BodyVelocity& xi, double dt);

/// g . exp(dt * xi): exact flow of a constant body velocity.
GroupElement exp_step(const GroupElement& g, const BodyVelocity& xi, double dt);

/// Inverse right Jacobian of the exponential at twist u: udot = dexpinv(u) * xi
/// integrates g(t) = g0 . exp(u(t)^) with body velocity xi.  Used by the
/// Munthe-Kaas integrator in simulate.
Eigen::Matrix3d se2_dexpinv(const Eigen::Vector3d& u);

/// Maximum-magnitude componentwise pose discrepancy, heading difference wrapped.
double pose_distance(const GroupElement& a, const GroupElement& b);

}  // namespace suds
