// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "dboost/experiments.hpp"
#include "dboost/spo.hpp"
#include "dboost/trees.hpp"

namespace {

using dboost::DecisionContext;
using dboost::RegressionTree;

double tree_sse(const RegressionTree& tree, const Eigen::MatrixXd& X,
                const Eigen::MatrixXd& Y) {
  return (tree.predict_rows(X) - Y).squaredNorm();
}

// Two clusters separated along feature 0 with distinct target means.
struct StepData {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;
};

StepData step_data() {
  StepData d;
  d.X.resize(6, 2);
  d.X << 0.0, 0.3, 0.1, 0.9, 0.2, 0.5, 0.8, 0.4, 0.9, 0.1, 1.0, 0.7;
  d.Y.resize(6, 1);
  d.Y << 1.0, 1.0, 1.0, 5.0, 5.0, 5.0;
  return d;
}

}  // namespace

TEST_CASE("depth-0 trees hold the column means of the targets") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd X = Eigen::MatrixXd::NullaryExpr(20, 3, [&] { return gauss(rng); });
  Eigen::MatrixXd Y = Eigen::MatrixXd::NullaryExpr(20, 2, [&] { return gauss(rng); });
  const RegressionTree tree = dboost::fit_mse_tree(X, Y, 0);
  CHECK(tree.depth() == 0);
  CHECK(tree.n_leaves() == 1);
  const Eigen::VectorXd mean = Y.colwise().mean();
  CHECK((tree.predict(X.row(4).transpose()) - mean).norm() <= 1e-12);
}

TEST_CASE("a clean step function is recovered exactly at depth 1") {
  const StepData d = step_data();
  const RegressionTree tree = dboost::fit_mse_tree(d.X, d.Y, 1);
  CHECK(tree.depth() == 1);
  CHECK(tree.n_leaves() == 2);
  REQUIRE(tree.nodes().size() == 3);
  CHECK(tree.nodes()[0].feature == 0);
  // Every sample lands on its cluster mean.
  CHECK(tree_sse(tree, d.X, d.Y) <= 1e-20);
}

TEST_CASE("constant targets collapse to a single leaf") {
  const StepData d = step_data();
  Eigen::MatrixXd Y = Eigen::MatrixXd::Constant(6, 1, 2.5);
  const RegressionTree tree = dboost::fit_mse_tree(d.X, Y, 2);
  CHECK(tree.n_leaves() == 1);
  CHECK(tree.predict(d.X.row(0).transpose())(0) == doctest::Approx(2.5));
}

TEST_CASE("training error never increases with depth") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd X = Eigen::MatrixXd::NullaryExpr(60, 3, [&] { return gauss(rng); });
  Eigen::MatrixXd Y(60, 2);
  for (Eigen::Index i = 0; i < 60; ++i) {
    Y(i, 0) = std::sin(2.0 * X(i, 0)) + 0.1 * gauss(rng);
    Y(i, 1) = X(i, 1) * X(i, 2) + 0.1 * gauss(rng);
  }
  const double e0 = tree_sse(dboost::fit_mse_tree(X, Y, 0), X, Y);
  const double e1 = tree_sse(dboost::fit_mse_tree(X, Y, 1), X, Y);
  const double e2 = tree_sse(dboost::fit_mse_tree(X, Y, 2), X, Y);
  CHECK(e1 <= e0 + 1e-12);
  CHECK(e2 <= e1 + 1e-12);
  CHECK(e2 < e0);
}

TEST_CASE("samples route by x[feature] <= threshold") {
  std::vector<dboost::TreeNode> nodes(3);
  nodes[0].feature = 1;
  nodes[0].threshold = 0.5;
  nodes[0].left = 1;
  nodes[0].right = 2;
  nodes[1].value = Eigen::VectorXd::Constant(1, -1.0);
  nodes[2].value = Eigen::VectorXd::Constant(1, 1.0);
  const RegressionTree tree{std::move(nodes)};

  Eigen::VectorXd x(2);
  x << 9.0, 0.5;  // boundary goes left
  CHECK(tree.predict(x)(0) == doctest::Approx(-1.0));
  x(1) = 0.50001;
  CHECK(tree.predict(x)(0) == doctest::Approx(1.0));

  Eigen::MatrixXd X(2, 2);
  X << 0.0, 0.2, 0.0, 0.8;
  const Eigen::MatrixXd P = tree.predict_rows(X);
  CHECK(P(0, 0) == doctest::Approx(-1.0));
  CHECK(P(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("ties between equally good splits resolve to the lowest feature") {
  // Feature 1 duplicates feature 0, so both produce identical splits.
  Eigen::MatrixXd X(4, 2);
  X << 0.0, 0.0, 0.1, 0.1, 0.8, 0.8, 0.9, 0.9;
  Eigen::MatrixXd Y(4, 1);
  Y << 0.0, 0.0, 1.0, 1.0;
  const RegressionTree tree = dboost::fit_mse_tree(X, Y, 1);
  REQUIRE_FALSE(tree.nodes().empty());
  CHECK(tree.nodes()[0].feature == 0);
}

TEST_CASE("refitting the same data gives the identical tree") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd X = Eigen::MatrixXd::NullaryExpr(40, 4, [&] { return gauss(rng); });
  Eigen::MatrixXd Y = Eigen::MatrixXd::NullaryExpr(40, 2, [&] { return gauss(rng); });
  const RegressionTree a = dboost::fit_mse_tree(X, Y, 2);
  const RegressionTree b = dboost::fit_mse_tree(X, Y, 2);
  REQUIRE(a.nodes().size() == b.nodes().size());
  for (std::size_t k = 0; k < a.nodes().size(); ++k) {
    CHECK(a.nodes()[k].feature == b.nodes()[k].feature);
    CHECK(a.nodes()[k].threshold == b.nodes()[k].threshold);
    if (a.nodes()[k].is_leaf())
      CHECK((a.nodes()[k].value - b.nodes()[k].value).norm() == 0.0);
  }
}

TEST_CASE("depth-0 decision trees equal depth-0 CART trees exactly") {
  std::mt19937_64 rng(17);
  auto built = dboost::build_qp(rng, 6);
  DecisionContext ctx(built.problem);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd X = Eigen::MatrixXd::NullaryExpr(15, 3, [&] { return gauss(rng); });
  Eigen::MatrixXd costs = Eigen::MatrixXd::NullaryExpr(15, 6, [&] { return gauss(rng); });
  ctx.prime_oracle(costs);

  const RegressionTree cart = dboost::fit_mse_tree(X, costs, 0);
  const RegressionTree spot = dboost::fit_spot_tree(X, costs, 0, ctx);
  REQUIRE(cart.n_leaves() == 1);
  REQUIRE(spot.n_leaves() == 1);
  CHECK((cart.nodes()[0].value - spot.nodes()[0].value).norm() <= 1e-12);
}

TEST_CASE("decision trees keep cost means in their leaves") {
  std::mt19937_64 rng(19);
  auto built = dboost::build_qp(rng, 5);
  DecisionContext ctx(built.problem);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd X(8, 1);
  X << 0.0, 0.1, 0.2, 0.3, 0.7, 0.8, 0.9, 1.0;
  Eigen::MatrixXd costs = Eigen::MatrixXd::NullaryExpr(8, 5, [&] { return gauss(rng); });
  ctx.prime_oracle(costs);
  const RegressionTree spot = dboost::fit_spot_tree(X, costs, 1, ctx);
  for (const auto& node : spot.nodes()) {
    if (!node.is_leaf()) continue;
    // Reconstruct the reaching set and compare leaf value to the cost mean.
    std::vector<Eigen::Index> reach;
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      if ((spot.predict(X.row(i).transpose()) - node.value).norm() <= 1e-12)
        reach.push_back(i);
    REQUIRE_FALSE(reach.empty());
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(5);
    for (Eigen::Index i : reach) mean += costs.row(i).transpose();
    mean /= static_cast<double>(reach.size());
    CHECK((node.value - mean).norm() <= 1e-10);
  }
}

TEST_CASE("decision splits beat error splits when they share an optimum") {
  // Two regimes whose cost means rank vertices differently: the decision tree
  // must separate them just as CART does, reaching zero decision loss.
  dboost::QcpProblem p;
  p.P = Eigen::MatrixXd::Zero(2, 2);
  p.c = Eigen::VectorXd::Zero(2);
  p.A = Eigen::MatrixXd(3, 2);
  p.A << 1, 1, -1, 0, 0, -1;
  p.b = Eigen::VectorXd::Zero(3);
  p.b(0) = 1.0;
  p.cone = dboost::ConeSpec{dboost::zero_cone(1), dboost::nonneg_cone(2)};
  DecisionContext ctx(p);

  Eigen::MatrixXd X(6, 1);
  X << 0.0, 0.1, 0.2, 0.8, 0.9, 1.0;
  Eigen::MatrixXd costs(6, 2);
  costs << 1.0, 2.0, 1.1, 2.1, 0.9, 1.9,  //
      2.0, 1.0, 2.1, 1.1, 1.9, 0.9;
  ctx.prime_oracle(costs);
  const RegressionTree spot = dboost::fit_spot_tree(X, costs, 1, ctx);
  CHECK(spot.n_leaves() == 2);
  CHECK(std::abs(dboost::excess_cost(ctx, spot.predict_rows(X), costs)) <= 1e-6);
}

TEST_CASE("on regime-switching data decision trees match or beat CART in regret") {
  // Cost structure where the best decision flips with x while magnitudes pull
  // the squared-error split elsewhere.
  const dboost::QcpProblem p = dboost::motivating_problem();
  int spot_wins = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd X, costs;
    dboost::gen_motivating(40, rng, &X, &costs);
    DecisionContext ctx(p);
    ctx.prime_oracle(costs);
    const RegressionTree cart = dboost::fit_mse_tree(X, costs, 2);
    const RegressionTree spot = dboost::fit_spot_tree(X, costs, 2, ctx);
    const double cart_excess = dboost::excess_cost(ctx, cart.predict_rows(X), costs);
    const double spot_excess = dboost::excess_cost(ctx, spot.predict_rows(X), costs);
    if (spot_excess <= cart_excess + 1e-9) ++spot_wins;
  }
  CHECK(spot_wins >= 8);
}

TEST_CASE("forests average their members and respect the tree count") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd X = Eigen::MatrixXd::NullaryExpr(30, 3, [&] { return gauss(rng); });
  Eigen::MatrixXd Y = Eigen::MatrixXd::NullaryExpr(30, 2, [&] { return gauss(rng); });

  dboost::SubsampleRates rates;
  const dboost::Forest forest = dboost::fit_forest(X, Y, 1, 7, rates,
                                                   dboost::TreeObjective::kMse, rng);
  CHECK(forest.trees().size() == 7);
  Eigen::VectorXd manual = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd x = X.row(3).transpose();
  for (const auto& tree : forest.trees()) manual += tree.predict(x);
  manual /= 7.0;
  CHECK((forest.predict(x) - manual).norm() <= 1e-12);

  const Eigen::MatrixXd rows = forest.predict_rows(X);
  CHECK(rows.rows() == 30);
  CHECK(rows.cols() == 2);
}

TEST_CASE("a one-tree forest with full sampling equals the plain tree") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd X = Eigen::MatrixXd::NullaryExpr(25, 3, [&] { return gauss(rng); });
  Eigen::MatrixXd Y = Eigen::MatrixXd::NullaryExpr(25, 1, [&] { return gauss(rng); });
  dboost::SubsampleRates rates;
  rates.samples = 1.0;
  rates.features = 1.0;
  std::mt19937_64 forest_rng(1);
  const dboost::Forest forest = dboost::fit_forest(X, Y, 2, 1, rates,
                                                   dboost::TreeObjective::kMse, forest_rng);
  const RegressionTree tree = dboost::fit_mse_tree(X, Y, 2);
  CHECK((forest.predict_rows(X) - tree.predict_rows(X)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("forest fitting is reproducible from the generator seed") {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd X = Eigen::MatrixXd::NullaryExpr(30, 4, [&] { return gauss(rng); });
  Eigen::MatrixXd Y = Eigen::MatrixXd::NullaryExpr(30, 1, [&] { return gauss(rng); });
  dboost::SubsampleRates rates;
  std::mt19937_64 r1(5), r2(5);
  const dboost::Forest f1 =
      dboost::fit_forest(X, Y, 2, 5, rates, dboost::TreeObjective::kMse, r1);
  const dboost::Forest f2 =
      dboost::fit_forest(X, Y, 2, 5, rates, dboost::TreeObjective::kMse, r2);
  CHECK((f1.predict_rows(X) - f2.predict_rows(X)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("malformed tree and forest arguments are rejected") {
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(4, 2);
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(4, 1);
  std::mt19937_64 rng(1);
  dboost::SubsampleRates rates;
  CHECK_THROWS_AS(dboost::fit_mse_tree(X, Y, 3), std::invalid_argument);
  CHECK_THROWS_AS(dboost::fit_mse_tree(X, Y, -1), std::invalid_argument);
  CHECK_THROWS_AS(dboost::fit_mse_tree(X, Eigen::MatrixXd::Zero(5, 1), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(dboost::fit_forest(X, Y, 1, 0, rates, dboost::TreeObjective::kMse, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(dboost::fit_forest(X, Y, 1, 5, rates, dboost::TreeObjective::kSpo, rng,
                                     /*ctx=*/nullptr),
                  std::invalid_argument);
}
