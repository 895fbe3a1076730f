// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#ifndef DBOOST_QCPDIFF_HPP_
#define DBOOST_QCPDIFF_HPP_

#include <Eigen/Core>
#include <Eigen/QR>

#include "dboost/cones.hpp"
#include "dboost/qcp.hpp"

namespace dboost {

// Implicit-differentiation state at a converged fixed point w*. The solution
// map is differentiated through G = (I+M) DPi_C(w*) + I - 2 DPi_C(w*); the
// adjoint solve uses a rank-revealing factorization of G^T so degenerate
// points (singular G) still yield the minimum-norm least-squares solution.
struct BackwardWorkspace {
  LinearMap dpi;
  Eigen::MatrixXd G;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> gt_solver;
  bool invertible = false;
  Eigen::Index dz = 0;
  Eigen::Index dy = 0;
};

// n_free and cone must match the assembled problem; they are accepted
// explicitly so call sites state the split they differentiate at.
BackwardWorkspace build_workspace(const AssembledSystem& sys,
                                  const Eigen::Ref<const Eigen::VectorXd>& w_star,
                                  Eigen::Index n_free, const ConeSpec& cone);

struct DataGradients {
  Eigen::MatrixXd dP;
  Eigen::VectorXd dc;
  Eigen::MatrixXd dA;
  Eigen::VectorXd db;
  Eigen::VectorXd d_hat_z;
  Eigen::VectorXd d_hat_y;
  // True when G was numerically singular (non-differentiable point). The
  // gradients are then the least-squares surrogate from the rank-revealing
  // adjoint solve -- a useful descent heuristic, not an exact derivative.
  bool degenerate = false;
};

// Given dl_dz, the loss gradient with respect to z*, returns the gradients of
// the loss with respect to the problem data (P, c, A, b). The adjoint is
// d_hat = -G^-T DPi_C(w*)^T (dl_dz, 0); dropping the minus sign flips every
// gradient into an ascent direction (checked against finite differences and
// the analytic equality-constrained sensitivity).
DataGradients backward(const BackwardWorkspace& ws, const QcpSolution& sol,
                       const Eigen::Ref<const Eigen::VectorXd>& dl_dz);

}  // namespace dboost

#endif  // DBOOST_QCPDIFF_HPP_
