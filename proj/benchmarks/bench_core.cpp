// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
//
// Microbenchmarks for the hot paths: cone projections, cold and warm
// fixed-point solves, the adjoint backward pass, the decision-loss gradient
// and the boosting line search. Not registered with ctest; run the binary
// directly.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <random>

#include "dboost/boosting.hpp"
#include "dboost/cones.hpp"
#include "dboost/experiments.hpp"
#include "dboost/qcp.hpp"
#include "dboost/qcpdiff.hpp"
#include "dboost/spo.hpp"
#include "dboost/trees.hpp"

namespace {

dboost::BuiltProblem& qp25() {
  static dboost::BuiltProblem built = [] {
    std::mt19937_64 rng(7);
    return dboost::build_qp(rng, 25);
  }();
  return built;
}

Eigen::VectorXd qp25_cost(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::MatrixXd x = dboost::gen_features(1, qp25().model.dx(), rng);
  return dboost::gen_costs(qp25().model, x, rng).row(0);
}

void BM_ProjectSoc(benchmark::State& state) {
  const Eigen::Index dim = state.range(0);
  const dboost::ConeSpec cone{dboost::soc_cone(dim)};
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  const Eigen::VectorXd v = Eigen::VectorXd::NullaryExpr(dim, [&] { return gauss(rng); });
  for (auto _ : state) {
    benchmark::DoNotOptimize(dboost::project(cone, v));
  }
}
BENCHMARK(BM_ProjectSoc)->Arg(8)->Arg(64)->Arg(512);

void BM_DprojectSoc(benchmark::State& state) {
  const Eigen::Index dim = state.range(0);
  const dboost::ConeSpec cone{dboost::soc_cone(dim)};
  std::mt19937_64 rng(4);
  std::normal_distribution<double> gauss;
  const Eigen::VectorXd v = Eigen::VectorXd::NullaryExpr(dim, [&] { return gauss(rng); });
  for (auto _ : state) {
    benchmark::DoNotOptimize(dboost::dprojection(cone, v));
  }
}
BENCHMARK(BM_DprojectSoc)->Arg(8)->Arg(64);

void BM_Assemble(benchmark::State& state) {
  const dboost::QcpProblem& p = qp25().problem;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dboost::assemble(p));
  }
}
BENCHMARK(BM_Assemble);

void BM_SolveCold(benchmark::State& state) {
  dboost::QcpProblem p = qp25().problem;
  p.c = qp25_cost(11);
  const auto sys = dboost::assemble(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dboost::solve(sys));
  }
}
BENCHMARK(BM_SolveCold);

void BM_SolveWarm(benchmark::State& state) {
  const auto sys = dboost::assemble(qp25().problem);
  const Eigen::VectorXd base = qp25_cost(11);
  const Eigen::VectorXd next = qp25_cost(12);
  const Eigen::VectorXd warm = dboost::solve_with_cost(sys, base).w;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dboost::solve_with_cost(sys, next, {}, &warm));
  }
}
BENCHMARK(BM_SolveWarm);

void BM_Backward(benchmark::State& state) {
  dboost::QcpProblem p = qp25().problem;
  p.c = qp25_cost(11);
  const auto sys = dboost::assemble(p);
  const auto sol = dboost::solve(sys);
  const auto ws = dboost::build_workspace(sys, sol.w, p.dz(), sys.cone_dual);
  const Eigen::VectorXd g = Eigen::VectorXd::Ones(p.dz());
  for (auto _ : state) {
    benchmark::DoNotOptimize(dboost::backward(ws, sol, g));
  }
}
BENCHMARK(BM_Backward);

void BM_QspoGrad(benchmark::State& state) {
  dboost::DecisionContext ctx(qp25().problem);
  const Eigen::VectorXd c_hat = qp25_cost(21);
  const Eigen::VectorXd c = qp25_cost(22);
  ctx.prime_oracle(c.transpose());
  Eigen::VectorXd warm;
  dboost::qspo_grad(ctx, c_hat, c, &warm);
  const Eigen::VectorXd warm0 = warm;
  for (auto _ : state) {
    warm = warm0;
    benchmark::DoNotOptimize(dboost::qspo_grad(ctx, c_hat, c, &warm));
  }
}
BENCHMARK(BM_QspoGrad);

void BM_LineSearch(benchmark::State& state) {
  const Eigen::Index m = 32;
  std::mt19937_64 rng(31);
  Eigen::MatrixXd X, costs;
  dboost::gen_motivating(m, rng, &X, &costs);
  dboost::DecisionContext ctx(dboost::motivating_problem());
  ctx.prime_oracle(costs);
  const Eigen::MatrixXd predictions = Eigen::MatrixXd::Zero(m, costs.cols());
  const Eigen::MatrixXd outputs = costs * 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dboost::line_search_beta(ctx, predictions, outputs, costs));
  }
}
BENCHMARK(BM_LineSearch);

void BM_FitMseTree(benchmark::State& state) {
  std::mt19937_64 rng(17);
  const Eigen::MatrixXd X = dboost::gen_features(200, 10, rng);
  std::normal_distribution<double> gauss;
  const Eigen::MatrixXd Y =
      Eigen::MatrixXd::NullaryExpr(200, 4, [&] { return gauss(rng); });
  for (auto _ : state) {
    benchmark::DoNotOptimize(dboost::fit_mse_tree(X, Y, 2));
  }
}
BENCHMARK(BM_FitMseTree);

}  // namespace

BENCHMARK_MAIN();
