#include "mmnetloc/cost.hpp"

#include <stdexcept>
#include <string>

#include "mmnetloc/projections.hpp"

namespace mmnetloc {

StateZ StateZ::zeros(const Network& net) {
  StateZ z;
  z.x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net.n) * net.p);
  z.y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net.edge_count()) * net.p);
  z.w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net.link_count()) * net.p);
  return z;
}

bool StateZ::shaped_for(const Network& net) const {
  return x.size() == static_cast<Eigen::Index>(net.n) * net.p &&
         y.size() == static_cast<Eigen::Index>(net.edge_count()) * net.p &&
         w.size() == static_cast<Eigen::Index>(net.link_count()) * net.p;
}

void require_shape(const Network& net, const StateZ& z, const char* where) {
  if (!z.shaped_for(net))
    throw std::invalid_argument(std::string(where) + ": state shape does not match network");
}

void require_x_shape(const Network& net, const Eigen::VectorXd& x, const char* where) {
  if (x.size() != static_cast<Eigen::Index>(net.n) * net.p)
    throw std::invalid_argument(std::string(where) + ": x must have n*p entries");
}

namespace {

inline auto block(const Eigen::VectorXd& v, int idx, int p) {
  return v.segment(static_cast<Eigen::Index>(idx) * p, p);
}

inline auto block(Eigen::VectorXd& v, int idx, int p) {
  return v.segment(static_cast<Eigen::Index>(idx) * p, p);
}

}  // namespace

double cost_original(const Network& net, const Measurements& meas,
                     const Eigen::VectorXd& x) {
  require_x_shape(net, x, "cost_original");
  const int p = net.p;
  double f = 0.0;
  for (int e = 0; e < net.edge_count(); ++e) {
    const Edge& ed = net.edges[e];
    const double res = (block(x, ed.i, p) - block(x, ed.j, p)).norm() - meas.d(e);
    f += 0.5 * res * res;
  }
  for (int l = 0; l < net.link_count(); ++l) {
    const AnchorLink& lk = net.incidence.links[l];
    const double res = (block(x, lk.sensor, p) - net.anchors[lk.anchor]).norm() - meas.r(l);
    f += 0.5 * res * res;
  }
  return f;
}

double cost_z(const Network& net, const Measurements& meas, const StateZ& z) {
  (void)meas;
  require_shape(net, z, "cost_z");
  const int p = net.p;
  double f = 0.0;
  for (int e = 0; e < net.edge_count(); ++e) {
    const Edge& ed = net.edges[e];
    f += 0.5 * (block(z.x, ed.i, p) - block(z.x, ed.j, p) - block(z.y, e, p)).squaredNorm();
  }
  for (int l = 0; l < net.link_count(); ++l) {
    const AnchorLink& lk = net.incidence.links[l];
    f += 0.5 *
         (block(z.x, lk.sensor, p) - net.anchors[lk.anchor] - block(z.w, l, p)).squaredNorm();
  }
  return f;
}

StateZ grad_z(const Network& net, const Measurements& meas, const StateZ& z) {
  (void)meas;
  require_shape(net, z, "grad_z");
  const int p = net.p;
  StateZ g = StateZ::zeros(net);
  for (int e = 0; e < net.edge_count(); ++e) {
    const Edge& ed = net.edges[e];
    const Eigen::VectorXd res = block(z.x, ed.i, p) - block(z.x, ed.j, p) - block(z.y, e, p);
    block(g.x, ed.i, p) += res;
    block(g.x, ed.j, p) -= res;
    block(g.y, e, p) = -res;
  }
  for (int l = 0; l < net.link_count(); ++l) {
    const AnchorLink& lk = net.incidence.links[l];
    const Eigen::VectorXd res =
        block(z.x, lk.sensor, p) - net.anchors[lk.anchor] - block(z.w, l, p);
    block(g.x, lk.sensor, p) += res;
    block(g.w, l, p) = -res;
  }
  return g;
}

StateZ reduce_to_x(const Network& net, const Measurements& meas,
                   const Eigen::VectorXd& x) {
  require_x_shape(net, x, "reduce_to_x");
  const int p = net.p;
  const Eigen::VectorXd tie = default_tie_break(p);
  StateZ z = StateZ::zeros(net);
  z.x = x;
  for (int e = 0; e < net.edge_count(); ++e) {
    const Edge& ed = net.edges[e];
    block(z.y, e, p) = project_sphere(block(x, ed.i, p) - block(x, ed.j, p), meas.d(e), tie);
  }
  for (int l = 0; l < net.link_count(); ++l) {
    const AnchorLink& lk = net.incidence.links[l];
    block(z.w, l, p) =
        project_sphere(block(x, lk.sensor, p) - net.anchors[lk.anchor], meas.r(l), tie);
  }
  return z;
}

}  // namespace mmnetloc
