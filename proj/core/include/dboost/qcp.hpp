// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#ifndef DBOOST_QCP_HPP_
#define DBOOST_QCP_HPP_

#include <Eigen/Core>
#include <Eigen/LU>

#include <stdexcept>
#include <string>

#include "dboost/cones.hpp"

namespace dboost {

// min_z 1/2 z'Pz + c'z  s.t.  Az + s = b, s in cone.
// P must be symmetric positive semidefinite; the cone is a product of Zero,
// NonNeg and Soc blocks with total dimension equal to rows(A).
struct QcpProblem {
  Eigen::MatrixXd P;
  Eigen::VectorXd c;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  ConeSpec cone;

  Eigen::Index dz() const { return P.rows(); }
  Eigen::Index dy() const { return A.rows(); }

  // Throws std::invalid_argument on dimension mismatches, non-symmetric or
  // indefinite P (eigenvalues below -1e-8), or a cone containing Free blocks.
  void validate() const;
};

struct SolverSettings {
  int max_iter = 50000;
  double tol_abs = 1e-8;
  double tol_rel = 1e-8;
  int check_every = 10;
};

// Operator-splitting data for one problem: the consolidated fixed-point map
// w -> (I+M)^-1 (2 Pi_C(w) - w - q) + w - Pi_C(w) with
// M = [[P, A'], [-A, 0]], q = (c, b), C = R^dz x dual(cone).
// The (I+M) factorization depends only on (P, A), so one AssembledSystem
// serves every per-sample solve that swaps the cost vector.
struct AssembledSystem {
  QcpProblem problem;
  ConeSpec cone_dual;
  Eigen::MatrixXd M;
  Eigen::VectorXd q;
  Eigen::PartialPivLU<Eigen::MatrixXd> linear_solver;

  Eigen::Index dim() const { return M.rows(); }
};

AssembledSystem assemble(const QcpProblem& problem);

// One application of the fixed-point map at w.
Eigen::VectorXd fixed_point_step(const Eigen::Ref<const Eigen::VectorXd>& w,
                                 const AssembledSystem& sys, Eigen::Index n_free,
                                 const ConeSpec& cone);

struct QcpSolution {
  Eigen::VectorXd z;
  Eigen::VectorXd y;
  Eigen::VectorXd s;
  Eigen::VectorXd w;  // converged fixed point
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MaxIterationsExceeded : SolverError {
  MaxIterationsExceeded(const std::string& what, int iters, double primal, double dual)
      : SolverError(what), iterations(iters), primal_residual(primal), dual_residual(dual) {}
  int iterations;
  double primal_residual;
  double dual_residual;
};

struct SingularSystem : SolverError {
  using SolverError::SolverError;
};

// Iterates the fixed-point map until the primal and dual KKT residuals meet
// tol_abs + tol_rel * scale and the fixed-point displacement ||F(w) - w|| is
// below 8 * tol_abs. Throws MaxIterationsExceeded with best-seen residuals.
QcpSolution solve(const QcpProblem& problem, const SolverSettings& settings = {},
                  const Eigen::VectorXd* warm_start = nullptr);
QcpSolution solve(const AssembledSystem& sys, const SolverSettings& settings = {},
                  const Eigen::VectorXd* warm_start = nullptr);

// Re-solves the assembled problem with a different cost vector, reusing the
// cached factorization. Residuals are measured against the given cost.
QcpSolution solve_with_cost(const AssembledSystem& sys,
                            const Eigen::Ref<const Eigen::VectorXd>& cost,
                            const SolverSettings& settings = {},
                            const Eigen::VectorXd* warm_start = nullptr);

struct KktResiduals {
  double primal = 0.0;  // ||Az + s - b||
  double dual = 0.0;    // ||Pz + A'y + c||
  double gap = 0.0;     // |z'Pz + c'z + b'y|
};

KktResiduals kkt_residuals(const QcpProblem& problem, const QcpSolution& sol);

double quadratic_objective(const Eigen::MatrixXd& P, const Eigen::Ref<const Eigen::VectorXd>& c,
                           const Eigen::Ref<const Eigen::VectorXd>& z);

}  // namespace dboost

#endif  // DBOOST_QCP_HPP_
