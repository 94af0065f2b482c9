#include "suds/geometry.hpp"

#include <cmath>

namespace suds {

namespace {
// Below this |omega * dt| the V-matrix of the planar exponential switches to
// its series expansion to avoid 0/0.
constexpr double kSmallAngle = 1e-8;
}  // namespace

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * M_PI);
  if (w <= -M_PI) w += 2.0 * M_PI;
  return w;
}

GroupElement identity_element() { return GroupElement{}; }

GroupElement compose(const GroupElement& g1, const GroupElement& g2) {
  const double c = std::cos(g1.heading);
  const double s = std::sin(g1.heading);
  GroupElement out;
  out.x = g1.x + c * g2.x - s * g2.y;
  out.y = g1.y + s * g2.x + c * g2.y;
  out.heading = wrap_angle(g1.heading + g2.heading);
  return out;
}

GroupElement inverse(const GroupElement& g) {
  const double c = std::cos(g.heading);
  const double s = std::sin(g.heading);
  GroupElement out;
  out.x = -(c * g.x + s * g.y);
  out.y = -(-s * g.x + c * g.y);
  out.heading = wrap_angle(-g.heading);
  return out;
}

BodyVelocity world_to_body(const GroupElement& g, const WorldVelocity& gdot) {
  const double c = std::cos(g.heading);
  const double s = std::sin(g.heading);
  BodyVelocity xi;
  xi.vx = c * gdot.xdot + s * gdot.ydot;
  xi.vy = -s * gdot.xdot + c * gdot.ydot;
  xi.omega_z = gdot.thetadot;
  return xi;
}

WorldVelocity body_to_world(const GroupElement& g, const BodyVelocity& xi) {
  const double c = std::cos(g.heading);
  const double s = std::sin(g.heading);
  WorldVelocity gdot;
  gdot.xdot = c * xi.vx - s * xi.vy;
  gdot.ydot = s * xi.vx + c * xi.vy;
  gdot.thetadot = xi.omega_z;
  return gdot;
}

GroupElement se2_exp(const BodyVelocity& xi, double dt) {
  const double th = xi.omega_z * dt;
  const double ux = xi.vx * dt;
  const double uy = xi.vy * dt;
  double A, B;
  if (std::abs(th) < kSmallAngle) {
    A = 1.0 - th * th / 6.0;
    B = -th / 2.0 + th * th * th / 24.0;
  } else {
    A = std::sin(th) / th;
    B = (std::cos(th) - 1.0) / th;
  }
  GroupElement out;
  out.x = A * ux + B * uy;
  out.y = -B * ux + A * uy;
  out.heading = wrap_angle(th);
  return out;
}

GroupElement exp_step(const GroupElement& g, const BodyVelocity& xi, double dt) {
  return compose(g, se2_exp(xi, dt));
}

Eigen::Matrix3d se2_dexpinv(const Eigen::Vector3d& u) {
  const double th = u.z();
  const double th2 = th * th;
  double A;
  if (th2 < kSmallAngle) {
    A = 1.0 / 12.0 + th2 / 720.0;
  } else {
    A = 1.0 / th2 - (1.0 + std::cos(th)) / (2.0 * th * std::sin(th));
  }
  Eigen::Matrix3d ad;
  ad << 0.0, -th, u.y(),
        th, 0.0, -u.x(),
        0.0, 0.0, 0.0;
  return Eigen::Matrix3d::Identity() + 0.5 * ad + A * ad * ad;
}

double pose_distance(const GroupElement& a, const GroupElement& b) {
  const double dx = std::abs(a.x - b.x);
  const double dy = std::abs(a.y - b.y);
  const double dh = std::abs(wrap_angle(a.heading - b.heading));
  return std::max({dx, dy, dh});
}

}  // namespace suds
