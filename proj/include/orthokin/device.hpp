#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "orthokin/errors.hpp"
#include "orthokin/model.hpp"
#include "orthokin/orthoglide.hpp"
#include "orthokin/transmission.hpp"
#include "orthokin/wrist.hpp"

namespace orthokin {

// Full device: translation stage carrying the wrist. Translations and
// rotations are mechanically decoupled, so the 6x6 Jacobian is block
// diagonal and the two inverse problems solve independently.

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

struct DeviceIk {
  TranslationJoints translation;
  WristIk wrist;
  WristLimitReport wrist_limits;
};

// Inverse kinematics of the whole device. Translation errors are rethrown
// with the stage named; the wrist reports gimbal proximity and limit
// violations in-band rather than throwing, since the translation result
// remains valid either way.
inline DeviceIk ik_device(const Pose& pose, const DeviceGeometry& g) {
  DeviceIk out;
  try {
    out.translation = ik_translation(pose.position, g);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("translation stage: ") + e.what());
  }
  out.wrist = ik_wrist(pose.orientation);
  out.wrist_limits = check_wrist_limits(out.wrist.joints, g);
  return out;
}

// Forward kinematics from actuator space. Wrist motors 1 and 2 pass through
// the double-cardan chains on legs 1 and 2; motor 3 drives roll directly.
// The chains are homokinetic, so wrist joint angles equal motor angles; the
// chains are still evaluated to surface transmission infeasibility (bend
// beyond the parallelogram cone) for the commanded carriage positions.
inline Pose fk_device(const TranslationJoints& joints,
                      const Eigen::Vector3d& wrist_motors,
                      const DeviceGeometry& g) {
  Pose pose;
  pose.position = fk_translation(joints, g);
  WristJoints w;
  w.theta[0] = double_cardan_transfer(wrist_motors[0], pose.position, g, 1)
                   .phi_after_u2;
  w.theta[1] = double_cardan_transfer(wrist_motors[1], pose.position, g, 2)
                   .phi_after_u2;
  w.theta[2] = wrist_motors[2];
  pose.orientation = fk_wrist(w);
  return pose;
}

// Block-diagonal device Jacobian: upper-left the translation block, lower-
// right the wrist block, off-diagonal blocks exactly zero. Requires a
// strictly feasible position and a nonsingular wrist.
inline Matrix6d jacobian_device(const Pose& pose, const DeviceGeometry& g) {
  Eigen::Matrix3d Jt;
  try {
    Jt = jacobian_translation(pose.position, g);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("translation stage: ") + e.what());
  }
  const WristIk wik = ik_wrist(pose.orientation);
  if (wik.gimbal_singular) {
    throw Error(ErrorCode::GimbalSingular, "wrist stage");
  }
  Matrix6d J;
  J.setZero();
  J.topLeftCorner<3, 3>() = Jt;
  J.bottomRightCorner<3, 3>() = wrist_jacobian(wik.joints);
  return J;
}

// Static force map: actuator efforts tau = J^T w for an external wrench
// w = (force, torque) applied at the tool point. Rows 1-3 are carriage
// forces, rows 4-6 wrist motor torques.
inline Vector6d actuator_efforts(const Pose& pose, const Vector6d& wrench,
                                 const DeviceGeometry& g) {
  return jacobian_device(pose, g).transpose() * wrench;
}

struct IsotropyPosture {
  TranslationJoints translation;
  WristJoints wrist;
  Pose pose;
};

// The posture where the device Jacobian is the identity: carriages at
// rho = (L, L, L) put the tool point at the frame origin with all legs
// orthogonal, and the zeroed wrist aligns its roll axis with z. Only the
// pitch/yaw/roll variant has this posture inside its working envelope; the
// symmetric three-rotation wrist is not modeled.
inline IsotropyPosture isotropy_posture(const DeviceGeometry& g) {
  validate_geometry(g);
  if (g.variant != DeviceVariant::ThreeT_TwoR_OneR) {
    throw Error(ErrorCode::UnsupportedVariant,
                "isotropy posture is only defined for 3T2R1R");
  }
  IsotropyPosture ip;
  const double L = g.leg_length;
  ip.translation.rho = {L, L, L};
  ip.wrist.theta = {0.0, 0.0, 0.0};
  ip.pose.position = {0.0, 0.0, 0.0};
  ip.pose.orientation = Eigen::Quaterniond::Identity();
  return ip;
}

}  // namespace orthokin
