#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "orthokin/errors.hpp"
#include "orthokin/model.hpp"

namespace orthokin {

// Translation stage: three identical legs ride on mutually orthogonal rails,
// leg i translating along the frame axis e_i (e1 = x, e2 = y, e3 = z). Each
// leg ties its carriage at rho_i * e_i to the moving point p through a
// parallelogram of length L, so p stays on the sphere |p - rho_i e_i| = L.
// Eliminating the carriage leaves the cylinder condition r_i <= L, where r_i
// is the distance from p to rail i.

namespace detail {

// Squared distance from p to rail i (0-based).
inline double rail_dist2(const Eigen::Vector3d& p, int i) {
  const int a = (i + 1) % 3;
  const int b = (i + 2) % 3;
  return p[a] * p[a] + p[b] * p[b];
}

inline std::string leg_list(unsigned mask) {
  std::string s = "legs ";
  bool first = true;
  for (int i = 0; i < 3; ++i) {
    if (mask & (1u << i)) {
      if (!first) s += ',';
      s += char('1' + i);
      first = false;
    }
  }
  return s;
}

// Rows of A are the leg vectors (p - rho_i e_i); B holds their rail
// components. A p_dot = B rho_dot is the differentiated loop closure.
inline void loop_matrices(const Eigen::Vector3d& p, const Eigen::Vector3d& rho,
                          Eigen::Matrix3d& A, Eigen::Matrix3d& B) {
  B.setZero();
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d row = p;
    row[i] -= rho[i];
    A.row(i) = row;
    B(i, i) = p[i] - rho[i];
  }
}

inline double assembly_det(const Eigen::Vector3d& p, const Eigen::Vector3d& rho) {
  Eigen::Matrix3d A, B;
  loop_matrices(p, rho, A, B);
  return A.determinant();
}

}  // namespace detail

// Classification of a point against the translation workspace. Feasibility
// is decided by the exact comparisons below; margin is an advisory signed
// slack (length units, smallest over all active limits) used by searches.
struct PointCheck {
  bool feasible = false;
  ErrorCode reason = ErrorCode::OutsideCylinder;  // valid when !feasible
  unsigned leg_mask = 0;                          // offending legs, bit i-1
  double margin = 0.0;
  TranslationJoints joints;  // positive-branch carriages; NaN where undefined
};

inline PointCheck check_point(const Eigen::Vector3d& p,
                              const DeviceGeometry& g) {
  validate_geometry(g);
  const double L = g.leg_length;
  const double band = 1e-12 * L;  // exclusion band around the cylinder wall

  PointCheck out;
  out.joints.rho.setConstant(std::numeric_limits<double>::quiet_NaN());
  unsigned outside = 0, boundary = 0, stroke = 0, cone = 0;
  double margin = std::numeric_limits<double>::infinity();

  for (int i = 0; i < 3; ++i) {
    const double r = std::sqrt(detail::rail_dist2(p, i));
    margin = std::min(margin, L - r - band);
    if (r > L) {
      outside |= 1u << i;
      continue;
    }
    if (L - r <= band) boundary |= 1u << i;
    const double axial = std::sqrt((L - r) * (L + r));
    out.joints.rho[i] = p[i] + axial;

    margin = std::min(margin, out.joints.rho[i] - g.stroke_min[i]);
    margin = std::min(margin, g.stroke_max[i] - out.joints.rho[i]);
    if (out.joints.rho[i] < g.stroke_min[i] ||
        out.joints.rho[i] > g.stroke_max[i]) {
      stroke |= 1u << i;
    }

    const double beta = std::atan2(r, axial);
    margin = std::min(margin, (g.half_cone_angle - beta) * L);
    if (beta > g.half_cone_angle) cone |= 1u << i;
  }

  out.margin = margin;
  if (outside) {
    out.reason = ErrorCode::OutsideCylinder;
    out.leg_mask = outside;
  } else if (boundary) {
    out.reason = ErrorCode::BoundarySingular;
    out.leg_mask = boundary;
  } else if (stroke) {
    out.reason = ErrorCode::StrokeExceeded;
    out.leg_mask = stroke;
  } else if (cone) {
    out.reason = ErrorCode::ConeExceeded;
    out.leg_mask = cone;
  } else {
    out.feasible = true;
  }
  return out;
}

// Positive-branch inverse kinematics: rho_i = p_i + sqrt(L^2 - r_i^2).
// Throws OutsideCylinder, BoundarySingular, StrokeExceeded or ConeExceeded,
// listing every offending leg of the highest-precedence failure.
inline TranslationJoints ik_translation(const Eigen::Vector3d& p,
                                        const DeviceGeometry& g) {
  const PointCheck c = check_point(p, g);
  if (!c.feasible) throw Error(c.reason, detail::leg_list(c.leg_mask));
  return c.joints;
}

// Signed residuals |p - rho_i e_i| - L, one per leg.
inline Eigen::Vector3d constraint_residual(const Eigen::Vector3d& p,
                                           const TranslationJoints& joints,
                                           const DeviceGeometry& g) {
  validate_geometry(g);
  Eigen::Vector3d res;
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d d = p;
    d[i] -= joints.rho[i];
    res[i] = d.norm() - g.leg_length;
  }
  return res;
}

namespace detail {

inline Eigen::Matrix3d jacobian_from(const Eigen::Vector3d& p,
                                     const Eigen::Vector3d& rho,
                                     const DeviceGeometry& g) {
  Eigen::Matrix3d A, B;
  loop_matrices(p, rho, A, B);
  const double L3 = g.leg_length * g.leg_length * g.leg_length;
  if (std::abs(A.determinant()) <= 1e-12 * L3) {
    throw Error(ErrorCode::SingularConfiguration, "legs are coplanar");
  }
  return A.partialPivLu().solve(B);
}

}  // namespace detail

// Velocity map J = dp/drho = A^-1 B. Identity at the isotropic posture
// rho = (L, L, L), p = 0. Throws ik errors plus SingularConfiguration when
// |det A| <= 1e-12 L^3.
inline Eigen::Matrix3d jacobian_translation(const Eigen::Vector3d& p,
                                            const DeviceGeometry& g) {
  const PointCheck c = check_point(p, g);
  if (!c.feasible) throw Error(c.reason, detail::leg_list(c.leg_mask));
  return detail::jacobian_from(p, c.joints.rho, g);
}

// Velocity amplification: singular values of J in descending order and
// their ratio kappa = sigma1/sigma3.
struct Amplification {
  Eigen::Vector3d sigma{0.0, 0.0, 0.0};
  double kappa = 0.0;
};

inline Amplification velocity_amplification(const Eigen::Vector3d& p,
                                            const DeviceGeometry& g) {
  const Eigen::Matrix3d J = jacobian_translation(p, g);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(J);
  Amplification a;
  a.sigma = svd.singularValues();
  a.kappa = a.sigma[0] / a.sigma[2];
  return a;
}

namespace detail {

struct FkCandidate {
  Eigen::Vector3d p;
  bool qualifies = false;
  double det = 0.0;
};

// A few Newton steps on the sphere residuals clean up the closed-form root.
inline void polish_root(Eigen::Vector3d& p, const Eigen::Vector3d& rho,
                        double L) {
  for (int iter = 0; iter < 3; ++iter) {
    Eigen::Vector3d res;
    Eigen::Matrix3d N;
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      Eigen::Vector3d d = p;
      d[i] -= rho[i];
      const double n = d.norm();
      if (n < 1e-6 * L) {
        ok = false;
        break;
      }
      res[i] = n - L;
      N.row(i) = d / n;
    }
    if (!ok || res.cwiseAbs().maxCoeff() <= 1e-14 * L) return;
    const Eigen::Vector3d step = N.partialPivLu().solve(-res);
    if (!step.allFinite() || step.norm() > 0.5 * L) return;
    p += step;
  }
}

}  // namespace detail

// Forward kinematics by trilateration. The three spheres meet in at most two
// points, mirror images across the plane of the carriage centers; det A
// changes sign between them and is negative on the assembly branch (the one
// connected to the isotropic posture, where det A = -L^3). Roots that place
// any carriage below its platform contact (p_i > rho_i beyond tolerance) are
// not assemblies of the positive ik branch and are discarded.
//
// Throws NoIntersection when no assembly-branch root exists and
// BranchAmbiguous when the two roots coincide within 1e-9 L (p lies in the
// carriage plane, where the branch is degenerate).
inline Eigen::Vector3d fk_translation(const TranslationJoints& joints,
                                      const DeviceGeometry& g) {
  validate_geometry(g);
  const double L = g.leg_length;
  const double L2 = L * L;
  const double tol = 1e-9 * L;
  const Eigen::Vector3d rho = joints.rho;
  if (!rho.allFinite()) {
    throw Error(ErrorCode::NoIntersection, "non-finite joint values");
  }

  int zeros = 0, zi = -1;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(rho[i]) <= 1e-12 * L) {
      ++zeros;
      zi = i;
    }
  }
  if (zeros >= 2) {
    throw Error(ErrorCode::BranchAmbiguous, "coincident leg spheres");
  }

  // Noise floor for discriminant-type quantities of scale L^2.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * L2;

  std::array<detail::FkCandidate, 2> cand;
  int ncand = 0;

  if (zeros == 1) {
    // Sphere zi is centered at the origin, so |p|^2 = L^2 outright and the
    // other two spheres fix the coordinates along their rails.
    const double s = L2;
    Eigen::Vector3d base = Eigen::Vector3d::Zero();
    double sum2 = 0.0;
    for (int j = 0; j < 3; ++j) {
      if (j == zi) continue;
      const double cj = rho[j] * rho[j] - L2;
      base[j] = (s + cj) / (2.0 * rho[j]);
      sum2 += base[j] * base[j];
    }
    const double t2 = s - sum2;
    if (t2 < -noise) {
      throw Error(ErrorCode::NoIntersection, "leg spheres do not meet");
    }
    const double t = std::sqrt(std::max(t2, 0.0));
    for (const double pz : {-t, t}) {
      Eigen::Vector3d p = base;
      p[zi] = pz;
      cand[ncand++].p = p;
    }
  } else {
    // With s = |p|^2, each sphere gives p_i = (s + c_i) / (2 rho_i); pushing
    // these back into |p|^2 = s yields a quadratic in s.
    double a = 0.0, b = -1.0, c0 = 0.0;
    Eigen::Vector3d ci;
    for (int i = 0; i < 3; ++i) {
      ci[i] = rho[i] * rho[i] - L2;
      const double inv = 1.0 / (rho[i] * rho[i]);
      a += 0.25 * inv;
      b += 0.5 * ci[i] * inv;
      c0 += 0.25 * ci[i] * ci[i] * inv;
    }
    const double disc = b * b - 4.0 * a * c0;
    const double discScale =
        std::max({b * b, std::abs(4.0 * a * c0), 1e-300});
    if (disc < -64.0 * std::numeric_limits<double>::epsilon() * discScale) {
      throw Error(ErrorCode::NoIntersection, "leg spheres do not meet");
    }
    const double root = std::sqrt(std::max(disc, 0.0));
    const double q = (b >= 0.0) ? -0.5 * (b + root) : -0.5 * (b - root);
    const double sa = q / a;
    const double sb = (q != 0.0) ? c0 / q : sa;
    const double sNoise = 64.0 * std::numeric_limits<double>::epsilon() *
                          (L2 + std::abs(sa) + std::abs(sb));
    for (double s : {sa, sb}) {
      if (s < -sNoise) continue;
      s = std::max(s, 0.0);
      Eigen::Vector3d p;
      for (int i = 0; i < 3; ++i) p[i] = (s + ci[i]) / (2.0 * rho[i]);
      cand[ncand++].p = p;
    }
    if (ncand == 0) {
      throw Error(ErrorCode::NoIntersection, "leg spheres do not meet");
    }
  }

  for (int k = 0; k < ncand; ++k) {
    detail::polish_root(cand[k].p, rho, L);
    bool assembly = true;
    for (int i = 0; i < 3; ++i) {
      assembly = assembly && cand[k].p[i] <= rho[i] + tol;
    }
    Eigen::Vector3d res;
    for (int i = 0; i < 3; ++i) {
      Eigen::Vector3d d = cand[k].p;
      d[i] -= rho[i];
      res[i] = d.norm() - L;
    }
    cand[k].qualifies = assembly && res.cwiseAbs().maxCoeff() <= 1e-6 * L;
    cand[k].det = detail::assembly_det(cand[k].p, rho);
  }

  const bool q0 = cand[0].qualifies;
  const bool q1 = ncand == 2 && cand[1].qualifies;
  if (q0 && q1) {
    if ((cand[0].p - cand[1].p).norm() <= tol) {
      throw Error(ErrorCode::BranchAmbiguous, "solution branches coincide");
    }
    if (cand[0].det < 0.0 && cand[1].det >= 0.0) return cand[0].p;
    if (cand[1].det < 0.0 && cand[0].det >= 0.0) return cand[1].p;
    return cand[0].p.squaredNorm() <= cand[1].p.squaredNorm() ? cand[0].p
                                                              : cand[1].p;
  }
  if (q0) return cand[0].p;
  if (q1) return cand[1].p;
  throw Error(ErrorCode::NoIntersection, "no assembly-branch intersection");
}

}  // namespace orthokin
