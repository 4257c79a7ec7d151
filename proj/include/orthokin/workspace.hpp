#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "orthokin/errors.hpp"
#include "orthokin/model.hpp"
#include "orthokin/orthoglide.hpp"

namespace orthokin {

struct Box {
  Eigen::Vector3d lo{0.0, 0.0, 0.0};
  Eigen::Vector3d hi{0.0, 0.0, 0.0};
};

struct GridCell {
  bool feasible = false;
  ErrorCode reason = ErrorCode::OutsideCylinder;  // valid when !feasible
  double sigma_min = std::numeric_limits<double>::quiet_NaN();
  double sigma_max = std::numeric_limits<double>::quiet_NaN();
  double kappa = std::numeric_limits<double>::quiet_NaN();
};

// Regular grid sampled at cell centers, x fastest then y then z. With an
// odd resolution over symmetric bounds the frame origin is a cell center.
struct WorkspaceGrid {
  Box bounds;
  int resolution = 0;
  std::vector<GridCell> cells;

  int index(int i, int j, int k) const {
    return (k * resolution + j) * resolution + i;
  }
  Eigen::Vector3d cell_center(int i, int j, int k) const {
    Eigen::Vector3d c;
    const Eigen::Vector3d ext = bounds.hi - bounds.lo;
    c[0] = bounds.lo[0] + (i + 0.5) * ext[0] / resolution;
    c[1] = bounds.lo[1] + (j + 0.5) * ext[1] / resolution;
    c[2] = bounds.lo[2] + (k + 0.5) * ext[2] / resolution;
    return c;
  }
  const GridCell& at(int i, int j, int k) const { return cells[index(i, j, k)]; }
};

namespace detail {

inline void require_box(const Box& b) {
  for (int a = 0; a < 3; ++a) {
    if (!std::isfinite(b.lo[a]) || !std::isfinite(b.hi[a]) ||
        !(b.lo[a] < b.hi[a])) {
      throw Error(ErrorCode::BadBounds, "need lo < hi on every axis");
    }
  }
}

}  // namespace detail

// Classify every cell center and record the velocity amplification of the
// feasible ones. Cell order and values are deterministic.
inline WorkspaceGrid map_workspace(const DeviceGeometry& g, const Box& bounds,
                                   int resolution) {
  validate_geometry(g);
  detail::require_box(bounds);
  if (resolution < 2) {
    throw Error(ErrorCode::BadResolution, "resolution must be >= 2");
  }

  WorkspaceGrid grid;
  grid.bounds = bounds;
  grid.resolution = resolution;
  grid.cells.resize(static_cast<size_t>(resolution) * resolution * resolution);

  for (int k = 0; k < resolution; ++k) {
    for (int j = 0; j < resolution; ++j) {
      for (int i = 0; i < resolution; ++i) {
        const Eigen::Vector3d p = grid.cell_center(i, j, k);
        GridCell& cell = grid.cells[grid.index(i, j, k)];
        const PointCheck c = check_point(p, g);
        if (!c.feasible) {
          cell.feasible = false;
          cell.reason = c.reason;
          continue;
        }
        try {
          const Eigen::Matrix3d J = detail::jacobian_from(p, c.joints.rho, g);
          Eigen::JacobiSVD<Eigen::Matrix3d> svd(J);
          const Eigen::Vector3d s = svd.singularValues();
          cell.feasible = true;
          cell.sigma_min = s[2];
          cell.sigma_max = s[0];
          cell.kappa = s[0] / s[2];
        } catch (const Error&) {
          // A cell center landing exactly on the coplanar-leg surface has no
          // usable velocity map; report it as that singularity.
          cell.feasible = false;
          cell.reason = ErrorCode::SingularConfiguration;
        }
      }
    }
  }
  return grid;
}

// Axis-aligned cube, faces parallel to the coordinate planes.
struct CubicWorkspace {
  Eigen::Vector3d center{0.0, 0.0, 0.0};
  double edge = 0.0;
};

namespace detail {

// Sample fractions along one cube axis: corners, midpoints and an n-point
// uniform refinement, deduplicated.
inline std::vector<double> cube_fractions(int n) {
  std::vector<double> f{0.0, 0.5, 1.0};
  for (int k = 0; k < n; ++k) {
    f.push_back(n == 1 ? 0.5 : static_cast<double>(k) / (n - 1));
  }
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

// Fast singular-value extrema via the eigenvalues of J^T J (closed-form
// symmetric solve; adequate for band comparisons, unlike the full-precision
// SVD used for reported values).
inline void sigma_extrema(const Eigen::Matrix3d& J, double* lo, double* hi) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
  es.computeDirect(J.transpose() * J);
  *lo = std::sqrt(std::max(es.eigenvalues()[0], 0.0));
  *hi = std::sqrt(std::max(es.eigenvalues()[2], 0.0));
}

// Signed fit quality of one point: the workspace margin, and when a
// conditioning band [1/psi, psi] is requested, also the slack to that band
// (scaled by L so the units match). Negative means unacceptable.
inline double point_fit(const Eigen::Vector3d& p, const DeviceGeometry& g,
                        double psi, bool* ok) {
  const PointCheck c = check_point(p, g);
  double fit = c.margin;
  bool acceptable = c.feasible;
  if (psi > 0.0 && c.feasible) {
    try {
      const Eigen::Matrix3d J = jacobian_from(p, c.joints.rho, g);
      double smin = 0.0, smax = 0.0;
      sigma_extrema(J, &smin, &smax);
      const double slack =
          std::min(psi - smax, smin - 1.0 / psi) * g.leg_length;
      fit = std::min(fit, slack);
      acceptable = acceptable && smax <= psi && smin >= 1.0 / psi;
    } catch (const Error&) {
      fit = std::min(fit, -g.leg_length);
      acceptable = false;
    }
  }
  if (ok) *ok = acceptable;
  return fit;
}

struct CubeFit {
  bool certified = false;
  Eigen::Vector3d center{0.0, 0.0, 0.0};
  double score = -std::numeric_limits<double>::infinity();
};

// Worst point_fit over the cube's sample lattice; certified only if every
// lattice point is individually acceptable. Scanning stops once the running
// minimum drops below cutoff: such a cube already lost to the incumbent, so
// its exact score is irrelevant (and it reports certified = false, which is
// then conservative).
inline CubeFit score_cube(const Eigen::Vector3d& center, double edge,
                          const DeviceGeometry& g, double psi,
                          const std::vector<double>& fr,
                          double cutoff = -std::numeric_limits<double>::infinity()) {
  CubeFit out;
  out.center = center;
  out.score = std::numeric_limits<double>::infinity();
  out.certified = true;
  if (edge == 0.0) {
    bool ok = false;
    out.score = point_fit(center, g, psi, &ok);
    out.certified = ok;
    return out;
  }
  for (double fz : fr) {
    for (double fy : fr) {
      for (double fx : fr) {
        Eigen::Vector3d p = center;
        p[0] += (fx - 0.5) * edge;
        p[1] += (fy - 0.5) * edge;
        p[2] += (fz - 0.5) * edge;
        bool ok = false;
        out.score = std::min(out.score, point_fit(p, g, psi, &ok));
        out.certified = out.certified && ok;
        if (out.score < cutoff) {
          out.certified = false;
          return out;
        }
      }
    }
  }
  return out;
}

// Find the best center for a cube of the given edge inside domain. A coarse
// scan (or the caller's seed) starts a compass pattern search on the worst-
// point fit. Everything is deterministic: fixed scan order, fixed step
// schedule, strict improvement moves only.
inline CubeFit fit_cube(const DeviceGeometry& g, double edge,
                        const Box& domain, double psi,
                        const Eigen::Vector3d* seed, int lattice_n = 5) {
  Box cdom;
  for (int a = 0; a < 3; ++a) {
    cdom.lo[a] = domain.lo[a] + 0.5 * edge;
    cdom.hi[a] = domain.hi[a] - 0.5 * edge;
    if (cdom.lo[a] > cdom.hi[a]) return CubeFit{};
  }
  const auto clampc = [&cdom](Eigen::Vector3d c) {
    for (int a = 0; a < 3; ++a) c[a] = std::clamp(c[a], cdom.lo[a], cdom.hi[a]);
    return c;
  };
  const std::vector<double> fr = cube_fractions(lattice_n);

  CubeFit best;
  if (seed) {
    best = score_cube(clampc(*seed), edge, g, psi, fr);
  } else {
    const int m = 7;
    for (int kz = 0; kz < m; ++kz) {
      for (int ky = 0; ky < m; ++ky) {
        for (int kx = 0; kx < m; ++kx) {
          Eigen::Vector3d c;
          c[0] = cdom.lo[0] + (cdom.hi[0] - cdom.lo[0]) * kx / (m - 1);
          c[1] = cdom.lo[1] + (cdom.hi[1] - cdom.lo[1]) * ky / (m - 1);
          c[2] = cdom.lo[2] + (cdom.hi[2] - cdom.lo[2]) * kz / (m - 1);
          const CubeFit f = score_cube(c, edge, g, psi, fr, best.score);
          if (f.score > best.score) best = f;
        }
      }
    }
  }

  double step = 0.0;
  for (int a = 0; a < 3; ++a) step = std::max(step, cdom.hi[a] - cdom.lo[a]);
  step = std::max(step / 4.0, 1e-9 * g.leg_length);
  const double step_min = 1e-6 * g.leg_length;
  while (step >= step_min) {
    bool improved = false;
    for (int a = 0; a < 3 && !improved; ++a) {
      for (double sgn : {1.0, -1.0}) {
        Eigen::Vector3d c = best.center;
        c[a] += sgn * step;
        c = clampc(c);
        const CubeFit f = score_cube(c, edge, g, psi, fr, best.score);
        if (f.score > best.score) {
          best = f;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

// Largest certified cube inside domain by bisection on the edge, optionally
// constrained to the conditioning band [1/psi, psi]. rel_tol is relative to
// the leg length.
inline CubicWorkspace largest_cube_impl(const DeviceGeometry& g,
                                        const Box& domain, double rel_tol,
                                        double psi) {
  validate_geometry(g);
  require_box(domain);
  if (!(rel_tol > 0.0)) {
    throw Error(ErrorCode::BadBounds, "tolerance must be > 0");
  }

  CubeFit at_zero = fit_cube(g, 0.0, domain, psi, nullptr);
  if (!at_zero.certified) {
    throw Error(ErrorCode::EmptyWorkspace, "no feasible point in bounds");
  }

  double lo = 0.0;
  Eigen::Vector3d lo_center = at_zero.center;
  double hi = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) hi = std::min(hi, domain.hi[a] - domain.lo[a]);

  CubeFit at_hi = fit_cube(g, hi, domain, psi, &lo_center);
  if (!at_hi.certified) {
    at_hi = fit_cube(g, hi, domain, psi, nullptr);
  }
  if (at_hi.certified) {
    return CubicWorkspace{at_hi.center, hi};
  }

  const double tol = rel_tol * g.leg_length;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    CubeFit f = fit_cube(g, mid, domain, psi, &lo_center);
    if (!f.certified) {
      // The warm start is only a heuristic; confirm a failure with the full
      // coarse scan before shrinking the edge.
      f = fit_cube(g, mid, domain, psi, nullptr);
    }
    if (f.certified) {
      lo = mid;
      lo_center = f.center;
    } else {
      hi = mid;
    }
  }
  return CubicWorkspace{lo_center, lo};
}

}  // namespace detail

// Largest axis-aligned cube of feasible points inside search_bounds. The
// edge is resolved to tol (absolute, length units); the returned cube is
// certified feasible on its sample lattice at that edge.
inline CubicWorkspace largest_cube(const DeviceGeometry& g,
                                   const Box& search_bounds, double tol) {
  validate_geometry(g);
  return detail::largest_cube_impl(g, search_bounds, tol / g.leg_length, 0.0);
}

struct DexterityExtrema {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double worst_kappa = 0.0;
};

// Velocity-amplification extrema over a uniform lattice spanning the cube,
// corners included. Throws CubeNotFeasible at the first infeasible sample.
inline DexterityExtrema dexterity_over_cube(const DeviceGeometry& g,
                                            const CubicWorkspace& cube,
                                            int samples_per_axis) {
  validate_geometry(g);
  if (samples_per_axis < 1) {
    throw Error(ErrorCode::BadResolution, "samples_per_axis must be >= 1");
  }
  DexterityExtrema ext;
  ext.sigma_min = std::numeric_limits<double>::infinity();
  ext.sigma_max = 0.0;
  ext.worst_kappa = 0.0;
  const int n = samples_per_axis;
  for (int kz = 0; kz < n; ++kz) {
    for (int ky = 0; ky < n; ++ky) {
      for (int kx = 0; kx < n; ++kx) {
        Eigen::Vector3d p = cube.center;
        const double fx = (n == 1) ? 0.5 : static_cast<double>(kx) / (n - 1);
        const double fy = (n == 1) ? 0.5 : static_cast<double>(ky) / (n - 1);
        const double fz = (n == 1) ? 0.5 : static_cast<double>(kz) / (n - 1);
        p[0] += (fx - 0.5) * cube.edge;
        p[1] += (fy - 0.5) * cube.edge;
        p[2] += (fz - 0.5) * cube.edge;
        const PointCheck c = check_point(p, g);
        if (!c.feasible) {
          throw Error(ErrorCode::CubeNotFeasible,
                      detail::leg_list(c.leg_mask) + " at lattice point");
        }
        const Eigen::Matrix3d J = detail::jacobian_from(p, c.joints.rho, g);
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(J);
        const Eigen::Vector3d s = svd.singularValues();
        ext.sigma_min = std::min(ext.sigma_min, s[2]);
        ext.sigma_max = std::max(ext.sigma_max, s[0]);
        ext.worst_kappa = std::max(ext.worst_kappa, s[0] / s[2]);
      }
    }
  }
  return ext;
}

}  // namespace orthokin
