#pragma once

#include <Eigen/Dense>

#include "mmnetloc/projections.hpp"

// Per-block update rules shared by the centralized solver and the per-node
// simulation. Both paths must run exactly these expressions on exactly the
// same operand values, in the same order, so their iterates stay bitwise
// identical.

namespace mmnetloc::detail {

inline double self_coefficient(double L, int degree, int anchor_count) {
  return (L - degree - anchor_count) / L;
}

// x_i+ = b_i x_i + (1/L) * [sum over incident edges of (x_j + sign * y_e)
//        + sum over links of (w_l + a_k)], with the bracket accumulated by
// the caller in incidence order.
inline Eigen::VectorXd x_update(const Eigen::Ref<const Eigen::VectorXd>& x_i,
                                double self_coef, double inv_L,
                                const Eigen::VectorXd& neighborhood_sum) {
  return self_coef * x_i + inv_L * neighborhood_sum;
}

// y_e+ = P_{||.||=d}((L-1)/L y_e + (1/L) * diff), diff = x_tail - x_head.
inline Eigen::VectorXd y_update(const Eigen::Ref<const Eigen::VectorXd>& y_e,
                                const Eigen::VectorXd& diff, double decay,
                                double inv_L, double d,
                                const Eigen::VectorXd& tie_break) {
  return project_sphere(decay * y_e + inv_L * diff, d, tie_break);
}

// w_l+ = P_{||.||=r}((L-1)/L w_l + (1/L)(x_i - a_k)).
inline Eigen::VectorXd w_update(const Eigen::Ref<const Eigen::VectorXd>& w_l,
                                const Eigen::Ref<const Eigen::VectorXd>& x_i,
                                const Eigen::VectorXd& anchor, double decay,
                                double inv_L, double r,
                                const Eigen::VectorXd& tie_break) {
  return project_sphere(decay * w_l + inv_L * (x_i - anchor), r, tie_break);
}

}  // namespace mmnetloc::detail
