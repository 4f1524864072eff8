#pragma once

#include <Eigen/Dense>

namespace mmnetloc {

// First canonical basis vector, the deterministic tie-break direction for
// projecting the zero vector onto a sphere.
inline Eigen::VectorXd default_tie_break(Eigen::Index dim) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
  e(0) = 1.0;
  return e;
}

/// Nearest point to v on the sphere of the given radius.
/// v == 0 maps to radius * tie_break; radius == 0 maps to the origin.
inline Eigen::VectorXd project_sphere(const Eigen::VectorXd& v, double radius,
                                      const Eigen::VectorXd& tie_break) {
  const double nv = v.norm();
  if (nv > 0.0) return (radius / nv) * v;
  return radius * tie_break;
}

inline Eigen::VectorXd project_sphere(const Eigen::VectorXd& v, double radius) {
  return project_sphere(v, radius, default_tie_break(v.size()));
}

}  // namespace mmnetloc
