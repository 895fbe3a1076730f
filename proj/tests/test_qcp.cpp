// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <future>
#include <random>
#include <vector>

#include "dboost/qcp.hpp"

namespace {

using dboost::ConeSpec;
using dboost::QcpProblem;
using dboost::SolverSettings;

// min (1/2) z'z - z  s.t.  z >= 0  encoded as  -z + s = 0, s in NonNeg(1).
QcpProblem one_dim_problem() {
  QcpProblem p;
  p.P = Eigen::MatrixXd::Identity(1, 1);
  p.c = Eigen::VectorXd::Constant(1, -1.0);
  p.A = Eigen::MatrixXd::Constant(1, 1, -1.0);
  p.b = Eigen::VectorXd::Zero(1);
  p.cone = ConeSpec{dboost::nonneg_cone(1)};
  return p;
}

// min (1/2)|z|^2  s.t.  z1 + z2 + z3 = 1  -> z* = (1/3, 1/3, 1/3).
QcpProblem equality_qp() {
  QcpProblem p;
  p.P = Eigen::MatrixXd::Identity(3, 3);
  p.c = Eigen::VectorXd::Zero(3);
  p.A = Eigen::MatrixXd::Ones(1, 3);
  p.b = Eigen::VectorXd::Ones(1);
  p.cone = ConeSpec{dboost::zero_cone(1)};
  return p;
}

// LP over the probability simplex: min c'z  s.t.  1'z = 1, z >= 0.
QcpProblem simplex_lp(const Eigen::VectorXd& c) {
  const Eigen::Index n = c.size();
  QcpProblem p;
  p.P = Eigen::MatrixXd::Zero(n, n);
  p.c = c;
  p.A = Eigen::MatrixXd(1 + n, n);
  p.A.row(0).setOnes();
  p.A.bottomRows(n) = -Eigen::MatrixXd::Identity(n, n);
  p.b = Eigen::VectorXd::Zero(1 + n);
  p.b(0) = 1.0;
  p.cone = ConeSpec{dboost::zero_cone(1), dboost::nonneg_cone(n)};
  return p;
}

QcpProblem random_equality_qp(std::mt19937_64& rng, Eigen::Index dz, Eigen::Index dy) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd l(dz, dz);
  for (Eigen::Index i = 0; i < dz; ++i)
    for (Eigen::Index j = 0; j < dz; ++j) l(i, j) = gauss(rng);
  QcpProblem p;
  p.P = l.transpose() * l + 0.1 * Eigen::MatrixXd::Identity(dz, dz);
  p.c = Eigen::VectorXd::NullaryExpr(dz, [&] { return gauss(rng); });
  p.A = Eigen::MatrixXd::NullaryExpr(dy, dz, [&] { return gauss(rng); });
  p.b = p.A * Eigen::VectorXd::NullaryExpr(dz, [&] { return gauss(rng); });
  p.cone = ConeSpec{dboost::zero_cone(dy)};
  return p;
}

}  // namespace

TEST_CASE("assemble builds the antisymmetric-block operator and q") {
  const QcpProblem lp = [] {
    QcpProblem p;
    p.P = Eigen::MatrixXd::Zero(1, 1);
    p.c = Eigen::VectorXd::Constant(1, -1.0);
    p.A = Eigen::MatrixXd::Constant(1, 1, -1.0);
    p.b = Eigen::VectorXd::Zero(1);
    p.cone = ConeSpec{dboost::nonneg_cone(1)};
    return p;
  }();
  const auto sys = dboost::assemble(lp);
  REQUIRE(sys.dim() == 2);
  Eigen::MatrixXd expected(2, 2);
  expected << 0.0, -1.0, 1.0, 0.0;
  CHECK((sys.M - expected).cwiseAbs().maxCoeff() == 0.0);
  CHECK(sys.q(0) == doctest::Approx(-1.0));
  CHECK(sys.q(1) == doctest::Approx(0.0));
  CHECK(sys.cone_dual.dim() == 1);
  CHECK(sys.cone_dual.blocks()[0].kind == dboost::ConeBlock::Kind::NonNeg);
}

TEST_CASE("assemble on an equality QP matches the hand-written 3x3 operator") {
  QcpProblem p;
  p.P = Eigen::MatrixXd::Identity(2, 2);
  p.c = Eigen::VectorXd::Zero(2);
  p.A = Eigen::MatrixXd::Ones(1, 2);
  p.b = Eigen::VectorXd::Ones(1);
  p.cone = ConeSpec{dboost::zero_cone(1)};
  const auto sys = dboost::assemble(p);
  Eigen::MatrixXd expected(3, 3);
  expected << 1, 0, 1, 0, 1, 1, -1, -1, 0;
  CHECK((sys.M - expected).cwiseAbs().maxCoeff() <= 1e-15);
  // Equality constraints dualize to a free block.
  CHECK(sys.cone_dual.blocks()[0].kind == dboost::ConeBlock::Kind::Free);
}

TEST_CASE("assemble factorization solves (I+M) r = v exactly") {
  std::mt19937_64 rng(11);
  const auto sys = dboost::assemble(random_equality_qp(rng, 6, 3));
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(sys.dim(), sys.dim());
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const Eigen::VectorXd v =
        Eigen::VectorXd::NullaryExpr(sys.dim(), [&] { return gauss(rng); });
    const Eigen::VectorXd r = sys.linear_solver.solve(v);
    CHECK(((eye + sys.M) * r - v).norm() <= 1e-10 * std::max(1.0, v.norm()));
  }
}

TEST_CASE("fixed_point_step leaves the known fixed point in place") {
  // For min (1/2)z^2 - z s.t. z >= 0: z* = 1, y* = 0, s* = 1,
  // u* = (1, 0), v* = (0, 1), w* = u* - v* = (1, -1).
  const auto sys = dboost::assemble(one_dim_problem());
  Eigen::VectorXd w_star(2);
  w_star << 1.0, -1.0;
  const Eigen::VectorXd next =
      dboost::fixed_point_step(w_star, sys, sys.problem.dz(), sys.problem.cone);
  CHECK((next - w_star).norm() <= 1e-9);
}

TEST_CASE("fixed_point_step maps the origin to itself when q = 0") {
  QcpProblem p;
  p.P = Eigen::MatrixXd::Identity(2, 2);
  p.c = Eigen::VectorXd::Zero(2);
  p.A = Eigen::MatrixXd::Identity(1, 2).row(0);
  p.b = Eigen::VectorXd::Zero(1);
  p.cone = ConeSpec{dboost::zero_cone(1)};
  const auto sys = dboost::assemble(p);
  const Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
  const Eigen::VectorXd next = dboost::fixed_point_step(w, sys, 2, sys.problem.cone);
  CHECK(next.norm() <= 1e-14);
}

TEST_CASE("fixed-point displacement shrinks along the iteration") {
  const auto sys = dboost::assemble(equality_qp());
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd w = Eigen::VectorXd::NullaryExpr(sys.dim(), [&] { return gauss(rng); });
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    const Eigen::VectorXd next =
        dboost::fixed_point_step(w, sys, sys.problem.dz(), sys.problem.cone);
    const double displacement = (next - w).norm();
    CHECK(displacement < previous);
    previous = displacement;
    w = next;
  }
}

TEST_CASE("solve recovers the analytic equality-QP minimizer") {
  const auto sol = dboost::solve(equality_qp());
  const Eigen::VectorXd expected = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  CHECK((sol.z - expected).norm() <= 1e-6);
  const auto res = dboost::kkt_residuals(equality_qp(), sol);
  CHECK(res.primal <= 1e-6);
  CHECK(res.dual <= 1e-6);
}

TEST_CASE("solve picks the cheapest simplex vertex for a linear cost") {
  Eigen::VectorXd c(3);
  c << 1.0, 2.0, 3.0;
  const auto sol = dboost::solve(simplex_lp(c));
  Eigen::VectorXd expected(3);
  expected << 1.0, 0.0, 0.0;
  CHECK((sol.z - expected).norm() <= 1e-5);
}

TEST_CASE("solve returns the inactive-constraint solution of the 1-d problem") {
  const auto sol = dboost::solve(one_dim_problem());
  CHECK(sol.z(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(sol.y(0)) <= 1e-6);
  CHECK(sol.s(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sol.iterations >= 1);
}

TEST_CASE("kkt_residuals vanish on a hand-written optimum and detect drift") {
  const QcpProblem p = equality_qp();
  dboost::QcpSolution sol;
  sol.z = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  sol.y = Eigen::VectorXd::Constant(1, -1.0 / 3.0);  // gradient balance z + A'y = 0
  sol.s = Eigen::VectorXd::Zero(1);
  const auto res = dboost::kkt_residuals(p, sol);
  CHECK(res.primal <= 1e-12);
  CHECK(res.dual <= 1e-12);
  CHECK(std::abs(res.gap) <= 1e-12);

  dboost::QcpSolution off = sol;
  off.z.array() += 0.1;
  const auto drift = dboost::kkt_residuals(p, off);
  CHECK(drift.primal == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(drift.dual > 1e-3);
}

TEST_CASE("solver output keeps KKT residuals at tolerance across problem types") {
  std::vector<QcpProblem> problems;
  problems.push_back(one_dim_problem());
  problems.push_back(equality_qp());
  Eigen::VectorXd c(4);
  c << 0.3, -0.2, 0.9, 0.1;
  problems.push_back(simplex_lp(c));
  for (const auto& p : problems) {
    const auto sol = dboost::solve(p);
    const auto res = dboost::kkt_residuals(p, sol);
    CHECK(res.primal <= 1e-6);
    CHECK(res.dual <= 1e-6);
  }
}

TEST_CASE("100 random equality QPs match the direct KKT solve") {
  std::mt19937_64 rng(20260819);
  std::uniform_int_distribution<int> dz_dist(2, 10);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index dz = dz_dist(rng);
    std::uniform_int_distribution<int> dy_dist(1, static_cast<int>(std::min<Eigen::Index>(5, dz - 1)));
    const Eigen::Index dy = dy_dist(rng);
    const QcpProblem p = random_equality_qp(rng, dz, dy);

    Eigen::MatrixXd kkt(dz + dy, dz + dy);
    kkt.topLeftCorner(dz, dz) = p.P;
    kkt.topRightCorner(dz, dy) = p.A.transpose();
    kkt.bottomLeftCorner(dy, dz) = p.A;
    kkt.bottomRightCorner(dy, dy).setZero();
    Eigen::VectorXd rhs(dz + dy);
    rhs.head(dz) = -p.c;
    rhs.tail(dy) = p.b;
    const Eigen::VectorXd direct = kkt.fullPivLu().solve(rhs);

    const auto sol = dboost::solve(p);
    const double rel = (sol.z - direct.head(dz)).norm() / std::max(1.0, direct.head(dz).norm());
    CHECK(rel <= 1e-5);
  }
}

TEST_CASE("warm starting from a converged point re-converges almost immediately") {
  const QcpProblem p = equality_qp();
  const auto cold = dboost::solve(p);
  const auto warm = dboost::solve(p, SolverSettings{}, &cold.w);
  CHECK(warm.iterations <= 5);
  CHECK((warm.z - cold.z).norm() <= 1e-8);
}

TEST_CASE("solve_with_cost shares one factorization across cost vectors") {
  Eigen::VectorXd c0(3);
  c0 << 1.0, 2.0, 3.0;
  const auto sys = dboost::assemble(simplex_lp(c0));
  Eigen::VectorXd c1(3);
  c1 << 3.0, 0.5, 2.0;

  const auto via_sys = dboost::solve_with_cost(sys, c1, SolverSettings{});
  QcpProblem direct = simplex_lp(c1);
  const auto via_problem = dboost::solve(direct);
  CHECK((via_sys.z - via_problem.z).norm() <= 1e-6);
  Eigen::VectorXd expected(3);
  expected << 0.0, 1.0, 0.0;
  CHECK((via_sys.z - expected).norm() <= 1e-5);
}

TEST_CASE("positive scaling of a linear cost leaves the argmin unchanged") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd c = Eigen::VectorXd::NullaryExpr(4, [&] { return gauss(rng); });
  const auto sys = dboost::assemble(simplex_lp(c));
  const auto base = dboost::solve_with_cost(sys, c, SolverSettings{});
  for (double lambda : {0.5, 2.0, 13.0}) {
    const auto scaled = dboost::solve_with_cost(sys, (lambda * c).eval(), SolverSettings{});
    CHECK((scaled.z - base.z).norm() <= 1e-5);
  }
}

TEST_CASE("an unbounded problem raises MaxIterationsExceeded with diagnostics") {
  // min -z s.t. -z + s = 0, s >= 0: objective decreases without bound.
  QcpProblem p;
  p.P = Eigen::MatrixXd::Zero(1, 1);
  p.c = Eigen::VectorXd::Constant(1, -1.0);
  p.A = Eigen::MatrixXd::Constant(1, 1, -1.0);
  p.b = Eigen::VectorXd::Zero(1);
  p.cone = ConeSpec{dboost::nonneg_cone(1)};
  SolverSettings settings;
  settings.max_iter = 200;
  try {
    dboost::solve(p, settings);
    FAIL("expected MaxIterationsExceeded");
  } catch (const dboost::MaxIterationsExceeded& e) {
    CHECK(e.iterations == 200);
    CHECK(std::isfinite(e.primal_residual));
    CHECK(std::isfinite(e.dual_residual));
    CHECK(e.dual_residual > 0.0);
  }
}

TEST_CASE("validate rejects malformed problems") {
  QcpProblem p = equality_qp();
  SUBCASE("dimension mismatch in c") {
    p.c = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  }
  SUBCASE("cone dimension differs from rows of A") {
    p.cone = ConeSpec{dboost::zero_cone(2)};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  }
  SUBCASE("non-symmetric P") {
    p.P(0, 1) = 0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  }
  SUBCASE("indefinite P") {
    p.P(0, 0) = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  }
  SUBCASE("free blocks are not a valid problem cone") {
    p.cone = ConeSpec{dboost::free_cone(1)};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  }
}

TEST_CASE("concurrent per-cost solves against one shared system are consistent") {
  Eigen::VectorXd c0(5);
  c0 << 1, 2, 3, 4, 5;
  const auto sys = dboost::assemble(simplex_lp(c0));
  std::mt19937_64 rng(303);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Eigen::VectorXd> costs;
  for (int k = 0; k < 8; ++k)
    costs.push_back(Eigen::VectorXd::NullaryExpr(5, [&] { return gauss(rng); }));

  std::vector<Eigen::VectorXd> sequential;
  for (const auto& c : costs)
    sequential.push_back(dboost::solve_with_cost(sys, c, SolverSettings{}).z);

  std::vector<std::future<Eigen::VectorXd>> futures;
  for (const auto& c : costs)
    futures.push_back(std::async(std::launch::async, [&sys, c] {
      return dboost::solve_with_cost(sys, c, SolverSettings{}).z;
    }));
  for (std::size_t k = 0; k < costs.size(); ++k)
    CHECK((futures[k].get() - sequential[k]).norm() <= 1e-9);
}

TEST_CASE("quadratic_objective evaluates (1/2)z'Pz + c'z") {
  Eigen::MatrixXd p(2, 2);
  p << 2, 0, 0, 4;
  Eigen::VectorXd c(2);
  c << 1, -1;
  Eigen::VectorXd z(2);
  z << 3, 2;
  // 0.5*(2*9 + 4*4) + (3 - 2) = 17 + 1.
  CHECK(dboost::quadratic_objective(p, c, z) == doctest::Approx(18.0));
}
