// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#include "dboost/qcpdiff.hpp"

#include <stdexcept>

namespace dboost {

BackwardWorkspace build_workspace(const AssembledSystem& sys,
                                  const Eigen::Ref<const Eigen::VectorXd>& w_star,
                                  Eigen::Index n_free, const ConeSpec& cone) {
  if (n_free != sys.problem.dz() || cone.dim() != sys.problem.dy()) {
    throw std::invalid_argument("build_workspace dimensions do not match the assembled system");
  }
  if (w_star.size() != sys.dim()) {
    throw std::invalid_argument("w_star has wrong dimension");
  }
  BackwardWorkspace ws;
  ws.dz = n_free;
  ws.dy = cone.dim();
  ws.dpi = dprojection_C(w_star, n_free, cone);
  const Eigen::MatrixXd& dpi = ws.dpi.matrix();
  ws.G = sys.M * dpi;
  ws.G += Eigen::MatrixXd::Identity(sys.dim(), sys.dim());
  ws.G -= dpi;
  ws.gt_solver.compute(ws.G.transpose());
  ws.invertible = ws.gt_solver.rank() == sys.dim();
  return ws;
}

DataGradients backward(const BackwardWorkspace& ws, const QcpSolution& sol,
                       const Eigen::Ref<const Eigen::VectorXd>& dl_dz) {
  if (dl_dz.size() != ws.dz) throw std::invalid_argument("dl_dz has wrong dimension");
  if (sol.z.size() != ws.dz || sol.y.size() != ws.dy) {
    throw std::invalid_argument("solution does not match workspace dimensions");
  }

  DataGradients g;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ws.dz + ws.dy);
  rhs.head(ws.dz) = dl_dz;
  rhs = ws.dpi.matrix().transpose() * rhs;
  // Exact adjoint when G is nonsingular; at degenerate points the
  // decomposition returns the minimum-norm least-squares surrogate instead of
  // killing the gradient, so downstream fits keep a usable descent direction.
  Eigen::VectorXd d_hat = -ws.gt_solver.solve(rhs);

  g.d_hat_z = d_hat.head(ws.dz);
  g.d_hat_y = d_hat.tail(ws.dy);
  g.dc = g.d_hat_z;
  g.db = g.d_hat_y;
  g.dP = 0.5 * (g.d_hat_z * sol.z.transpose() + sol.z * g.d_hat_z.transpose());
  g.dA = sol.y * g.d_hat_z.transpose() - g.d_hat_y * sol.z.transpose();
  g.degenerate = !ws.invertible;
  return g;
}

}  // namespace dboost
