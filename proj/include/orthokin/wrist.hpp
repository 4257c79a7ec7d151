#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <array>
#include <cmath>
#include <numbers>

#include "orthokin/errors.hpp"
#include "orthokin/model.hpp"

namespace orthokin {

// Wrist: three revolute joints equivalent to an x-y-z gimbal,
// R = Rx(theta1) Ry(theta2) Rz(theta3). Joints 1 and 2 (pitch/yaw) are
// mechanically limited; joint 3 (roll) spins freely. The gimbal lock at
// |theta2| = 90 deg sits outside the rated +/-45 deg envelope but the
// kinematics handle it so that out-of-envelope queries still answer.

inline Eigen::Quaterniond fk_wrist(const WristJoints& w) {
  const Eigen::Quaterniond q =
      Eigen::AngleAxisd(w.theta[0], Eigen::Vector3d::UnitX()) *
      Eigen::AngleAxisd(w.theta[1], Eigen::Vector3d::UnitY()) *
      Eigen::AngleAxisd(w.theta[2], Eigen::Vector3d::UnitZ());
  return canonical_quaternion(q);
}

struct WristIk {
  WristJoints joints;
  bool gimbal_singular = false;
};

// Euler extraction with theta2 in [-pi/2, pi/2], theta1 and theta3 in
// (-pi, pi]. theta2 comes from atan2(R02, hypot(R00, R01)) rather than
// asin(R02), which keeps full precision arbitrarily close to the lock.
// Within 1e-9 rad of |theta2| = pi/2 only theta1 -+ theta3 is determined;
// the convention theta3 = 0 picks one representative and sets the flag.
inline WristIk ik_wrist(const Eigen::Quaterniond& orientation) {
  const Eigen::Matrix3d R = orientation.normalized().toRotationMatrix();
  WristIk out;

  const double c2 = std::hypot(R(0, 0), R(0, 1));
  const double theta2 = std::atan2(R(0, 2), c2);
  const double half_pi = std::numbers::pi / 2.0;

  if (half_pi - std::abs(theta2) <= 1e-9) {
    out.gimbal_singular = true;
    const double combined = std::atan2(R(1, 0), R(1, 1));
    const double theta1 = (theta2 > 0.0) ? combined : -combined;
    out.joints.theta = {wrap_pi(theta1), theta2, 0.0};
    return out;
  }

  out.joints.theta = {wrap_pi(std::atan2(-R(1, 2), R(2, 2))), theta2,
                      wrap_pi(std::atan2(-R(0, 1), R(0, 0)))};
  return out;
}

// Spatial angular-velocity Jacobian: omega = Jw * theta_dot, columns the
// current joint axes x, Rx(theta1) y, Rx(theta1) Ry(theta2) z. Its
// determinant is cos(theta2) exactly.
inline Eigen::Matrix3d wrist_jacobian(const WristJoints& w) {
  const double c1 = std::cos(w.theta[0]);
  const double s1 = std::sin(w.theta[0]);
  const double c2 = std::cos(w.theta[1]);
  const double s2 = std::sin(w.theta[1]);
  Eigen::Matrix3d J;
  J.col(0) = Eigen::Vector3d(1.0, 0.0, 0.0);
  J.col(1) = Eigen::Vector3d(0.0, c1, s1);
  J.col(2) = Eigen::Vector3d(s2, -s1 * c2, c1 * c2);
  return J;
}

// Joint-limit report for the two bounded joints. Limits are inclusive.
// mechanism_singular marks |theta1| or |theta2| reaching 90 deg, where the
// gimbal loses a degree of freedom regardless of the configured limit.
struct WristLimitReport {
  bool feasible = false;
  bool mechanism_singular = false;
  std::array<double, 2> margin{0.0, 0.0};  // limit - |theta_i|, radians

  bool violated(int joint) const { return margin[joint] < 0.0; }
};

inline WristLimitReport check_wrist_limits(const WristJoints& w,
                                           const DeviceGeometry& g) {
  validate_geometry(g);
  const double half_pi = std::numbers::pi / 2.0;
  WristLimitReport rep;
  rep.margin[0] = g.wrist_limit - std::abs(w.theta[0]);
  rep.margin[1] = g.wrist_limit - std::abs(w.theta[1]);
  rep.feasible = rep.margin[0] >= 0.0 && rep.margin[1] >= 0.0;
  rep.mechanism_singular = std::abs(w.theta[0]) >= half_pi ||
                           std::abs(w.theta[1]) >= half_pi;
  return rep;
}

}  // namespace orthokin
