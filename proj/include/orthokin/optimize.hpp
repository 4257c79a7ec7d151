#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "orthokin/errors.hpp"
#include "orthokin/model.hpp"
#include "orthokin/workspace.hpp"

namespace orthokin {

// Design sizing: find the smallest leg length whose workspace contains a
// prescribed cube inside the conditioning band [1/psi, psi]. Strokes are an
// output of sizing, not an input: the search runs with unconstrained
// carriages and the report states the stroke interval the cube demands.

struct SizingReport {
  DeviceGeometry geometry;  // template with sized leg and required strokes
  double leg_length = 0.0;
  CubicWorkspace cube;  // certified placement of the target cube
  Eigen::Vector3d stroke_min_required{0.0, 0.0, 0.0};
  Eigen::Vector3d stroke_max_required{0.0, 0.0, 0.0};
  double worst_kappa = 0.0;
  double target_edge = 0.0;
  double psi = 0.0;
  double tolerance = 0.0;
  // Two-sided certificate: the cube fits at leg_length and no longer fits
  // at lower_test = leg_length * (1 - 10 * tolerance).
  double lower_test = 0.0;
  bool pass_at_solution = false;
  bool fail_below = false;
};

namespace detail {

inline DeviceGeometry sizing_geometry(const DeviceGeometry& tmpl, double L) {
  DeviceGeometry g = tmpl;
  g.leg_length = L;
  g.stroke_min = Eigen::Vector3d::Constant(-4.0 * L);
  g.stroke_max = Eigen::Vector3d::Constant(4.0 * L);
  return g;
}

// Every coordinate of a reachable point is bounded by L through the other
// legs' cylinders, so this box contains the whole translation workspace.
inline Box reach_box(double L) {
  return Box{Eigen::Vector3d::Constant(-L), Eigen::Vector3d::Constant(L)};
}

inline CubicWorkspace achieved_cube(const DeviceGeometry& tmpl, double L,
                                    double psi, double rel_tol) {
  return largest_cube_impl(sizing_geometry(tmpl, L), reach_box(L), rel_tol,
                           psi);
}

}  // namespace detail

// Smallest leg length (relative tolerance rel_tol, passing endpoint) whose
// conditioning-banded workspace admits a cube of edge target_edge. By
// similarity the achievable edge is proportional to the leg length, which
// gives the bracket; bisection then resolves the threshold.
inline SizingReport size_leg_length(double target_edge, double psi,
                                    const DeviceGeometry& tmpl,
                                    double rel_tol = 1e-6) {
  validate_geometry(tmpl);
  if (!(target_edge > 0.0) || !std::isfinite(target_edge)) {
    throw Error(ErrorCode::BadBound, "target_edge must be > 0");
  }
  if (!(psi >= 1.0) || !std::isfinite(psi)) {
    throw Error(ErrorCode::BadBound, "psi must be >= 1");
  }
  if (!(rel_tol > 0.0) || !(rel_tol <= 1e-2)) {
    throw Error(ErrorCode::BadBound, "tolerance must be in (0, 1e-2]");
  }
  const double inner = std::clamp(0.1 * rel_tol, 1e-9, 1e-4);

  const auto achieved = [&](double L) -> double {
    try {
      return detail::achieved_cube(tmpl, L, psi, inner).edge;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::EmptyWorkspace) {
        throw Error(ErrorCode::Unachievable,
                    "conditioning band admits no workspace");
      }
      throw;
    }
  };

  // Unit-leg probe. A band too tight to hold any cube (psi at or near 1)
  // cannot be fixed by scaling.
  const double edge_per_leg = achieved(1.0);
  if (!(edge_per_leg > 8.0 * inner)) {
    throw Error(ErrorCode::Unachievable,
                "conditioning band admits no cube of positive edge");
  }

  double hi = 1.25 * target_edge / edge_per_leg;
  double lo = 0.75 * target_edge / edge_per_leg;
  int guard = 0;
  while (achieved(hi) < target_edge) {
    hi *= 2.0;
    if (++guard > 16) {
      throw Error(ErrorCode::Unachievable, "no leg length reaches the target");
    }
  }
  guard = 0;
  while (achieved(lo) >= target_edge && lo > 1e-6 * hi) {
    lo *= 0.5;
    if (++guard > 64) break;
  }
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (achieved(mid) >= target_edge) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double L = hi;

  SizingReport rep;
  rep.target_edge = target_edge;
  rep.psi = psi;
  rep.tolerance = rel_tol;
  rep.leg_length = L;
  rep.lower_test = L * (1.0 - 10.0 * rel_tol);

  // Re-measure both certificate sides with the same deterministic search
  // that drove the bisection.
  const CubicWorkspace at_solution =
      detail::achieved_cube(tmpl, L, psi, inner);
  rep.fail_below = achieved(rep.lower_test) < target_edge;

  const DeviceGeometry g = detail::sizing_geometry(tmpl, L);
  const detail::CubeFit placement =
      detail::fit_cube(g, target_edge, detail::reach_box(L), psi,
                       &at_solution.center);
  rep.pass_at_solution =
      at_solution.edge >= target_edge && placement.certified;
  rep.cube = CubicWorkspace{placement.center, target_edge};

  rep.stroke_min_required.setConstant(std::numeric_limits<double>::infinity());
  rep.stroke_max_required.setConstant(
      -std::numeric_limits<double>::infinity());
  for (double fz : detail::cube_fractions(5)) {
    for (double fy : detail::cube_fractions(5)) {
      for (double fx : detail::cube_fractions(5)) {
        Eigen::Vector3d p = rep.cube.center;
        p[0] += (fx - 0.5) * target_edge;
        p[1] += (fy - 0.5) * target_edge;
        p[2] += (fz - 0.5) * target_edge;
        const PointCheck c = check_point(p, g);
        for (int i = 0; i < 3; ++i) {
          rep.stroke_min_required[i] =
              std::min(rep.stroke_min_required[i], c.joints.rho[i]);
          rep.stroke_max_required[i] =
              std::max(rep.stroke_max_required[i], c.joints.rho[i]);
        }
      }
    }
  }
  rep.worst_kappa = dexterity_over_cube(g, rep.cube, 5).worst_kappa;

  rep.geometry = tmpl;
  rep.geometry.leg_length = L;
  rep.geometry.stroke_min = rep.stroke_min_required;
  rep.geometry.stroke_max = rep.stroke_max_required;
  return rep;
}

struct SweepRow {
  double leg_length = 0.0;
  double achieved_edge = std::numeric_limits<double>::quiet_NaN();
  double worst_kappa = std::numeric_limits<double>::quiet_NaN();
  bool pass = false;
  std::string status = "ok";
};

// Trade-study table: for each candidate leg length, the largest cube the
// conditioning band admits and its worst amplification ratio. Rows never
// throw; a row that cannot be evaluated carries the error name in status.
// The achieved edge is a certified lower bound resolved to 1e-5 L, and pass
// grants it that same measurement tolerance against the target.
inline std::vector<SweepRow> sweep_report(const DeviceGeometry& tmpl,
                                          const std::vector<double>& lengths,
                                          double target_edge, double psi) {
  validate_geometry(tmpl);
  if (!(target_edge > 0.0) || !std::isfinite(target_edge)) {
    throw Error(ErrorCode::BadBound, "target_edge must be > 0");
  }
  if (!(psi >= 1.0) || !std::isfinite(psi)) {
    throw Error(ErrorCode::BadBound, "psi must be >= 1");
  }
  if (lengths.empty()) {
    throw Error(ErrorCode::EmptyInput, "no leg lengths to sweep");
  }
  const double inner = 1e-5;

  std::vector<SweepRow> rows;
  rows.reserve(lengths.size());
  for (double L : lengths) {
    SweepRow row;
    row.leg_length = L;
    try {
      if (!(L > 0.0) || !std::isfinite(L)) {
        throw Error(ErrorCode::NonPositiveLength,
                    "leg_length = " + std::to_string(L));
      }
      const CubicWorkspace cube = detail::achieved_cube(tmpl, L, psi, inner);
      row.achieved_edge = cube.edge;
      row.worst_kappa =
          dexterity_over_cube(detail::sizing_geometry(tmpl, L), cube, 5)
              .worst_kappa;
      row.pass = cube.edge + inner * L >= target_edge;
    } catch (const Error& e) {
      row.status = std::string(error_name(e.code()));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace orthokin
