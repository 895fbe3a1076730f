// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#include "dboost/qcp.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace dboost {

namespace {

constexpr double kFixedPointFactor = 8.0;

// Projects the trailing cone block of w onto the dual cone, leaving the free
// head in place. out must be presized to w.size().
void project_consolidated(const ConeSpec& cone_dual, Eigen::Index n_free,
                          const Eigen::VectorXd& w, Eigen::VectorXd& out) {
  out.head(n_free) = w.head(n_free);
  Eigen::Index at = n_free;
  for (const ConeBlock& blk : cone_dual.blocks()) {
    auto vb = w.segment(at, blk.dim);
    auto ob = out.segment(at, blk.dim);
    switch (blk.kind) {
      case ConeBlock::Kind::Zero:
        ob.setZero();
        break;
      case ConeBlock::Kind::Free:
        ob = vb;
        break;
      case ConeBlock::Kind::NonNeg:
        ob = vb.cwiseMax(0.0);
        break;
      case ConeBlock::Kind::Soc: {
        const double t = vb[0];
        const double rho = vb.tail(blk.dim - 1).norm();
        if (rho <= t) {
          ob = vb;
        } else if (rho <= -t) {
          ob.setZero();
        } else {
          const double scale = 0.5 * (t + rho);
          ob[0] = scale;
          ob.tail(blk.dim - 1) = (scale / rho) * vb.tail(blk.dim - 1);
        }
        break;
      }
    }
    at += blk.dim;
  }
}

struct ResidualScales {
  double primal_tol = 0.0;
  double dual_tol = 0.0;
};

QcpSolution run_iterations(const AssembledSystem& sys,
                           const Eigen::Ref<const Eigen::VectorXd>& cost,
                           const SolverSettings& settings, const Eigen::VectorXd* warm_start) {
  const QcpProblem& p = sys.problem;
  const Eigen::Index dz = p.dz();
  const Eigen::Index dy = p.dy();
  const Eigen::Index d = dz + dy;
  if (cost.size() != dz) throw std::invalid_argument("cost vector has wrong dimension");
  if (settings.max_iter < 1 || settings.check_every < 1 || settings.tol_abs <= 0.0 ||
      settings.tol_rel < 0.0) {
    throw std::invalid_argument("invalid solver settings");
  }

  Eigen::VectorXd q(d);
  q.head(dz) = cost;
  q.tail(dy) = p.b;

  Eigen::VectorXd w(d);
  if (warm_start != nullptr) {
    if (warm_start->size() != d) throw std::invalid_argument("warm start has wrong dimension");
    w = *warm_start;
  } else {
    w.setZero();
  }

  Eigen::VectorXd u(d), rhs(d), u_tilde(d);
  Eigen::VectorXd z(dz), y(dy), s(dy);
  Eigen::VectorXd Az(dy), Pz(dz), Aty(dz), primal_vec(dy), dual_vec(dz);

  const double norm_b = p.b.norm();
  const double norm_c = cost.norm();

  double best_primal = std::numeric_limits<double>::infinity();
  double best_dual = std::numeric_limits<double>::infinity();

  const double fp_tol = kFixedPointFactor * settings.tol_abs;

  for (int iter = 0;; ++iter) {
    project_consolidated(sys.cone_dual, dz, w, u);
    rhs = 2.0 * u - w - q;
    u_tilde = sys.linear_solver.solve(rhs);

    const bool final_iter = iter >= settings.max_iter;
    if (iter % settings.check_every == 0 || final_iter) {
      z = u.head(dz);
      y = u.tail(dy);
      s = y - w.tail(dy);
      Az.noalias() = p.A * z;
      Pz.noalias() = p.P * z;
      Aty.noalias() = p.A.transpose() * y;
      primal_vec = Az + s - p.b;
      dual_vec = Pz + Aty + cost;
      const double primal_res = primal_vec.norm();
      const double dual_res = dual_vec.norm();
      const double primal_tol =
          settings.tol_abs +
          settings.tol_rel * std::max({Az.norm(), s.norm(), norm_b});
      const double dual_tol =
          settings.tol_abs +
          settings.tol_rel * std::max({Pz.norm(), Aty.norm(), norm_c});
      const double fp_res = (u_tilde - u).norm();
      if (primal_res + dual_res < best_primal + best_dual) {
        best_primal = primal_res;
        best_dual = dual_res;
      }
      if (primal_res <= primal_tol && dual_res <= dual_tol && fp_res <= fp_tol) {
        QcpSolution sol;
        sol.z = std::move(z);
        sol.y = std::move(y);
        sol.s = std::move(s);
        sol.w = std::move(w);
        sol.iterations = iter;
        sol.primal_residual = primal_res;
        sol.dual_residual = dual_res;
        return sol;
      }
    }
    if (final_iter) break;
    w += u_tilde - u;
  }

  throw MaxIterationsExceeded(
      "splitting solver hit the iteration limit (" + std::to_string(settings.max_iter) +
          "); best residuals primal=" + std::to_string(best_primal) +
          " dual=" + std::to_string(best_dual),
      settings.max_iter, best_primal, best_dual);
}

}  // namespace

void QcpProblem::validate() const {
  if (P.rows() < 1 || P.rows() != P.cols()) {
    throw std::invalid_argument("P must be square and non-empty");
  }
  if (c.size() != P.rows()) throw std::invalid_argument("c does not match P");
  if (A.cols() != P.rows()) throw std::invalid_argument("A column count does not match P");
  if (b.size() != A.rows()) throw std::invalid_argument("b does not match A");
  if (cone.dim() != A.rows()) throw std::invalid_argument("cone dimension does not match A");
  if (!cone.is_problem_cone()) {
    throw std::invalid_argument("problem cone must contain only Zero, NonNeg and Soc blocks");
  }
  const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
  if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw std::invalid_argument("P must be symmetric");
  }
  if (P.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8 * scale) {
      throw std::invalid_argument("P must be positive semidefinite");
    }
  }
}

AssembledSystem assemble(const QcpProblem& problem) {
  problem.validate();
  const Eigen::Index dz = problem.dz();
  const Eigen::Index dy = problem.dy();
  const Eigen::Index d = dz + dy;

  AssembledSystem sys;
  sys.problem = problem;
  sys.cone_dual = dual(problem.cone);
  sys.M.setZero(d, d);
  sys.M.topLeftCorner(dz, dz) = problem.P;
  sys.M.topRightCorner(dz, dy) = problem.A.transpose();
  sys.M.bottomLeftCorner(dy, dz) = -problem.A;
  sys.q.resize(d);
  sys.q.head(dz) = problem.c;
  sys.q.tail(dy) = problem.b;

  Eigen::MatrixXd ipm = Eigen::MatrixXd::Identity(d, d) + sys.M;
  sys.linear_solver.compute(ipm);
  const double rcond = sys.linear_solver.rcond();
  if (!(rcond > 1e-14)) {
    throw SingularSystem("I + M is numerically singular (rcond=" + std::to_string(rcond) +
                         "); check that P is positive semidefinite");
  }
  return sys;
}

Eigen::VectorXd fixed_point_step(const Eigen::Ref<const Eigen::VectorXd>& w,
                                 const AssembledSystem& sys, Eigen::Index n_free,
                                 const ConeSpec& cone) {
  if (n_free != sys.problem.dz() || cone.dim() != sys.problem.dy()) {
    throw std::invalid_argument("fixed_point_step dimensions do not match the assembled system");
  }
  if (w.size() != sys.dim()) throw std::invalid_argument("w has wrong dimension");
  Eigen::VectorXd u = project_C(w, n_free, cone);
  Eigen::VectorXd u_tilde = sys.linear_solver.solve(2.0 * u - w - sys.q);
  return u_tilde + w - u;
}

QcpSolution solve(const QcpProblem& problem, const SolverSettings& settings,
                  const Eigen::VectorXd* warm_start) {
  AssembledSystem sys = assemble(problem);
  return run_iterations(sys, problem.c, settings, warm_start);
}

QcpSolution solve(const AssembledSystem& sys, const SolverSettings& settings,
                  const Eigen::VectorXd* warm_start) {
  return run_iterations(sys, sys.problem.c, settings, warm_start);
}

QcpSolution solve_with_cost(const AssembledSystem& sys,
                            const Eigen::Ref<const Eigen::VectorXd>& cost,
                            const SolverSettings& settings, const Eigen::VectorXd* warm_start) {
  return run_iterations(sys, cost, settings, warm_start);
}

KktResiduals kkt_residuals(const QcpProblem& problem, const QcpSolution& sol) {
  KktResiduals r;
  r.primal = (problem.A * sol.z + sol.s - problem.b).norm();
  r.dual = (problem.P * sol.z + problem.A.transpose() * sol.y + problem.c).norm();
  r.gap = std::abs(sol.z.dot(problem.P * sol.z) + problem.c.dot(sol.z) + problem.b.dot(sol.y));
  return r;
}

double quadratic_objective(const Eigen::MatrixXd& P, const Eigen::Ref<const Eigen::VectorXd>& c,
                           const Eigen::Ref<const Eigen::VectorXd>& z) {
  return 0.5 * z.dot(P * z) + c.dot(z);
}

}  // namespace dboost
