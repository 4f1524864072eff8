#pragma once

#include <Eigen/Dense>

#include "mmnetloc/graph.hpp"

namespace mmnetloc {

// Stacked optimization variable z = (x, y, w): sensor positions, one edge
// vector per canonical edge, one anchor vector per link. Feasibility
// (||y_e|| = d_e, ||w_l|| = r_l) is not a property of the type; only the
// sphere projections enforce it.
struct StateZ {
  Eigen::VectorXd x;  // n*p
  Eigen::VectorXd y;  // |E|*p
  Eigen::VectorXd w;  // links*p

  static StateZ zeros(const Network& net);
  bool shaped_for(const Network& net) const;
};

void require_shape(const Network& net, const StateZ& z, const char* where);
void require_x_shape(const Network& net, const Eigen::VectorXd& x, const char* where);

/// Maximum-likelihood cost: sum over edges of (||x_i - x_j|| - d_ij)^2 / 2
/// plus sum over anchor links of (||x_i - a_k|| - r_ik)^2 / 2.
double cost_original(const Network& net, const Measurements& meas,
                     const Eigen::VectorXd& x);

/// Reformulated quadratic cost ||Ax - y||^2 / 2 + ||Ex - alpha - w||^2 / 2,
/// evaluated by iterating edges and anchor links; the coupling matrix is
/// never materialized. Includes the constant ||alpha||^2 / 2 that the bare
/// quadratic form drops, so this agrees with cost_original at reduced points.
double cost_z(const Network& net, const Measurements& meas, const StateZ& z);

/// Gradient of cost_z, computed matrix-free:
///   g_x = A^T(Ax - y) + E^T(Ex - alpha - w),  g_y = y - Ax,
///   g_w = w - (Ex - alpha).
StateZ grad_z(const Network& net, const Measurements& meas, const StateZ& z);

/// Lifts positions to the feasible set: y_e = P(x_i - x_j) onto the d_e
/// sphere under the canonical edge orientation, w_l = P(x_i - a_k) onto the
/// r_l sphere. This is the initialization step of the solver.
StateZ reduce_to_x(const Network& net, const Measurements& meas,
                   const Eigen::VectorXd& x);

}  // namespace mmnetloc
