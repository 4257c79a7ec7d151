#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>

#include "orthokin/errors.hpp"
#include "orthokin/model.hpp"
#include "orthokin/orthoglide.hpp"

namespace orthokin {

// Wrist motors 1 and 2 sit on the carriages of legs 1 and 2 and reach the
// wrist through telescoping shafts with a universal joint at each end. The
// parallelogram keeps the end shafts parallel, so both joints of one chain
// share the same bend angle.

// Bend angle of the transmission along a leg: the angle between the rail
// axis and the leg direction, beta = asin(r_i / L). Zero on the rail,
// growing to the parallelogram cone limit. Propagates ik errors.
inline double bend_angle(const Eigen::Vector3d& p, const DeviceGeometry& g,
                         int leg) {
  if (leg < 1 || leg > 3) {
    throw std::invalid_argument("leg must be 1, 2 or 3");
  }
  ik_translation(p, g);
  const int i = leg - 1;
  const double r = std::sqrt(detail::rail_dist2(p, i));
  const double L = g.leg_length;
  return std::atan2(r, std::sqrt((L - r) * (L + r)));
}

// Single universal joint: tan(phi_out - phase) = tan(phi_in - phase) / cos
// beta, unrolled so the output is continuous and monotone in phi_in and
// adds exactly 2 pi when the input does. phase is the yoke angle at which
// input and output coincide and the velocity ratio peaks at 1 / cos beta.
// Requires 0 <= beta < pi/2.
inline double cardan_transfer(double phi_in, double bend, double phase) {
  if (!(bend >= 0.0 && bend < std::numbers::pi / 2.0)) {
    throw Error(ErrorCode::BendOutOfRange, "bend = " + std::to_string(bend));
  }
  const double u = phi_in - phase;
  const double k = std::round(u / std::numbers::pi);
  const double u0 = u - k * std::numbers::pi;
  const double v0 = std::atan2(std::sin(u0), std::cos(u0) * std::cos(bend));
  return phase + v0 + k * std::numbers::pi;
}

// Instantaneous speed ratio d phi_out / d phi_in of cardan_transfer:
// cos beta / (1 - sin^2 beta cos^2(phi_in - phase)). Oscillates between
// 1 / cos beta at the phase angle and cos beta a quarter turn later, twice
// per revolution.
inline double cardan_velocity_ratio(double phi_in, double bend, double phase) {
  if (!(bend >= 0.0 && bend < std::numbers::pi / 2.0)) {
    throw Error(ErrorCode::BendOutOfRange, "bend = " + std::to_string(bend));
  }
  const double s = std::sin(bend);
  const double cu = std::cos(phi_in - phase);
  return std::cos(bend) / (1.0 - s * s * cu * cu);
}

// Full chain for one leg: two universal joints with equal bends, second
// yoke staggered a quarter turn, which cancels the fluctuation exactly
// (phi_after_u2 == phi_motor). The identity is re-checked to 1e-12 on
// every call.
inline CardanChainState double_cardan_transfer(double phi_motor,
                                               const Eigen::Vector3d& p,
                                               const DeviceGeometry& g,
                                               int leg) {
  CardanChainState st;
  st.bend_angle = bend_angle(p, g, leg);
  st.phase = 0.0;
  st.phi_motor = phi_motor;
  st.phi_after_u1 = cardan_transfer(phi_motor, st.bend_angle, st.phase);
  st.phi_after_u2 = cardan_transfer(st.phi_after_u1, st.bend_angle,
                                    st.phase + std::numbers::pi / 2.0);
  const double tol = 1e-12 * std::max(1.0, std::abs(phi_motor));
  if (std::abs(st.phi_after_u2 - phi_motor) > tol) {
    throw std::logic_error("double cardan chain lost homokinetic identity");
  }
  return st;
}

}  // namespace orthokin
