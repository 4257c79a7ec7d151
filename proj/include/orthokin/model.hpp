#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "orthokin/errors.hpp"

namespace orthokin {

// Angles are radians internally. Degrees appear only at the interfaces
// (CLI arguments, file formats) and are converted on the way in/out.
//
// Conversion multiplies by the rounded constant pi/180 and converts back by
// dividing by the same constant, so a value that entered as a whole number of
// degrees serializes to exactly the same text again.
inline constexpr double kDeg2Rad = std::numbers::pi / 180.0;

inline double deg2rad(double deg) { return deg * kDeg2Rad; }
inline double rad2deg(double rad) { return rad / kDeg2Rad; }

// Wrap into (-pi, pi].
inline double wrap_pi(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a = std::numbers::pi;
  return a;
}

enum class DeviceVariant {
  ThreeT_TwoR_OneR,  // pitch/yaw limited, roll unlimited
  ThreeT_ThreeR,     // three symmetric rotations
};

inline std::string_view variant_name(DeviceVariant v) {
  return v == DeviceVariant::ThreeT_TwoR_OneR ? "3T2R1R" : "3T3R";
}

// Full device description. Default-constructed values describe the reference
// design: unit legs, generous strokes, 60 degree parallelogram cone and a
// +/-45 degree wrist.
struct DeviceGeometry {
  double leg_length = 1.0;
  Eigen::Vector3d stroke_min{0.05, 0.05, 0.05};
  Eigen::Vector3d stroke_max{2.0, 2.0, 2.0};
  double half_cone_angle = deg2rad(60.0);
  double wrist_limit = deg2rad(45.0);
  DeviceVariant variant = DeviceVariant::ThreeT_TwoR_OneR;
};

struct TranslationJoints {
  Eigen::Vector3d rho{0.0, 0.0, 0.0};
};

struct WristJoints {
  // theta[0], theta[1]: pitch/yaw, limited. theta[2]: roll, unlimited.
  Eigen::Vector3d theta{0.0, 0.0, 0.0};
};

struct Pose {
  Eigen::Vector3d position{0.0, 0.0, 0.0};
  Eigen::Quaterniond orientation{1.0, 0.0, 0.0, 0.0};
};

// One motor-to-wrist shaft: two universal joints in series.
struct CardanChainState {
  double bend_angle = 0.0;    // shared by both joints of the chain
  double phase = 0.0;         // yoke phase of the first joint
  double phi_motor = 0.0;
  double phi_after_u1 = 0.0;
  double phi_after_u2 = 0.0;
};

// Throws NonPositiveLength, EmptyStroke or BadAngleLimit. Angle limits must
// lie in (0, pi/2].
inline void validate_geometry(const DeviceGeometry& g) {
  if (!(g.leg_length > 0.0) || !std::isfinite(g.leg_length)) {
    throw Error(ErrorCode::NonPositiveLength,
                "leg_length = " + std::to_string(g.leg_length));
  }
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(g.stroke_min[i]) || !std::isfinite(g.stroke_max[i]) ||
        !(g.stroke_min[i] < g.stroke_max[i])) {
      throw Error(ErrorCode::EmptyStroke, "leg " + std::to_string(i + 1));
    }
  }
  const double half_pi = std::numbers::pi / 2.0;
  if (!(g.half_cone_angle > 0.0) || !(g.half_cone_angle <= half_pi)) {
    throw Error(ErrorCode::BadAngleLimit, "half_cone_angle");
  }
  if (!(g.wrist_limit > 0.0) || !(g.wrist_limit <= half_pi)) {
    throw Error(ErrorCode::BadAngleLimit, "wrist_limit");
  }
}

// Unit quaternion with a canonical sign: w > 0, or if w == 0 the first
// nonzero of (x, y, z) is positive. Makes quaternion output reproducible.
inline Eigen::Quaterniond canonical_quaternion(const Eigen::Quaterniond& q) {
  Eigen::Quaterniond r = q.normalized();
  double lead = r.w();
  if (lead == 0.0) lead = r.x();
  if (lead == 0.0) lead = r.y();
  if (lead == 0.0) lead = r.z();
  if (lead < 0.0) r.coeffs() = -r.coeffs();
  return r;
}

// Distance between rotations as unit quaternions, sign-ambiguity removed.
inline double quaternion_distance(const Eigen::Quaterniond& a,
                                  const Eigen::Quaterniond& b) {
  const double d1 = (a.coeffs() - b.coeffs()).norm();
  const double d2 = (a.coeffs() + b.coeffs()).norm();
  return std::min(d1, d2);
}

// All numeric text output uses 9 significant digits.
inline std::string format9(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Round to the value that 9-significant-digit text denotes, for numeric
// (non-text) serialization paths.
inline double snap9(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format9(v).c_str(), nullptr);
}

}  // namespace orthokin
