// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cstdio>
#include <random>
#include <string>

#include "dboost/boosting.hpp"
#include "dboost/experiments.hpp"
#include "dboost/serialize.hpp"
#include "dboost/spo.hpp"

namespace {

using dboost::QcpProblem;

void check_problems_equal(const QcpProblem& a, const QcpProblem& b) {
  CHECK((a.P - b.P).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.c - b.c).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.A - b.A).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.b - b.b).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(a.cone.blocks().size() == b.cone.blocks().size());
  for (std::size_t k = 0; k < a.cone.blocks().size(); ++k) {
    CHECK(a.cone.blocks()[k].kind == b.cone.blocks()[k].kind);
    CHECK(a.cone.blocks()[k].dim == b.cone.blocks()[k].dim);
  }
}

}  // namespace

TEST_CASE("problems of every family round-trip bit for bit") {
  std::mt19937_64 rng(1);
  SUBCASE("network flow") {
    const auto built = dboost::build_network_flow(rng);
    check_problems_equal(built.problem,
                         dboost::problem_from_json(dboost::problem_to_json(built.problem)));
  }
  SUBCASE("equality QP") {
    const auto built = dboost::build_qp(rng, 12);
    check_problems_equal(built.problem,
                         dboost::problem_from_json(dboost::problem_to_json(built.problem)));
  }
  SUBCASE("portfolio with a second-order cone") {
    const auto built = dboost::build_portfolio(rng, 6);
    check_problems_equal(built.problem,
                         dboost::problem_from_json(dboost::problem_to_json(built.problem)));
  }
  SUBCASE("two-asset scenario") {
    const QcpProblem p = dboost::motivating_problem();
    check_problems_equal(p, dboost::problem_from_json(dboost::problem_to_json(p)));
  }
}

TEST_CASE("a round-tripped problem solves to the same solution") {
  std::mt19937_64 rng(2);
  auto built = dboost::build_qp(rng, 8);
  std::normal_distribution<double> gauss(0.0, 1.0);
  built.problem.c = Eigen::VectorXd::NullaryExpr(8, [&] { return gauss(rng); });
  const QcpProblem back = dboost::problem_from_json(dboost::problem_to_json(built.problem));
  const auto s1 = dboost::solve(built.problem);
  const auto s2 = dboost::solve(back);
  CHECK((s1.z - s2.z).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fitted ensembles round-trip including diagnostics") {
  std::mt19937_64 rng(3);
  Eigen::MatrixXd X, costs;
  dboost::gen_motivating(25, rng, &X, &costs);
  dboost::BoostConfig cfg;
  cfg.max_stages = 5;
  const dboost::Ensemble ens = dboost::fit_mse_boost(X, costs, cfg);
  REQUIRE(ens.n_stages() >= 1);

  const dboost::Ensemble back = dboost::ensemble_from_json(dboost::ensemble_to_json(ens));
  CHECK((back.f0 - ens.f0).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(back.n_stages() == ens.n_stages());
  for (int k = 0; k < ens.n_stages(); ++k)
    CHECK(back.stages[static_cast<std::size_t>(k)].beta ==
          ens.stages[static_cast<std::size_t>(k)].beta);
  REQUIRE(back.loss_trace.size() == ens.loss_trace.size());
  for (std::size_t k = 0; k < ens.loss_trace.size(); ++k)
    CHECK(back.loss_trace[k] == ens.loss_trace[k]);
  CHECK(back.stop_reason == ens.stop_reason);
  CHECK(back.last_beta == ens.last_beta);
  CHECK(back.last_rel_change == ens.last_rel_change);

  // Identical predictions on fresh inputs.
  std::mt19937_64 rng2(4);
  Eigen::MatrixXd X2, costs2;
  dboost::gen_motivating(10, rng2, &X2, &costs2);
  CHECK((predict_ensemble(back, X2) - predict_ensemble(ens, X2)).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("malformed problem JSON fails with a field path") {
  const QcpProblem p = dboost::motivating_problem();
  const std::string good = dboost::problem_to_json(p);

  SUBCASE("not JSON at all") {
    CHECK_THROWS_AS(dboost::problem_from_json("{nope"), std::invalid_argument);
  }
  SUBCASE("wrong format tag") {
    std::string bad = good;
    const auto at = bad.find("dboost-problem");
    bad.replace(at, 14, "dboost-ensembl");
    CHECK_THROWS_AS(dboost::problem_from_json(bad), std::invalid_argument);
  }
  SUBCASE("missing field") {
    std::string bad = good;
    const auto at = bad.find("\"b\":");
    bad.replace(at, 4, "\"Z\":");
    CHECK_THROWS_AS(dboost::problem_from_json(bad), std::invalid_argument);
  }
  SUBCASE("unknown cone kind") {
    std::string bad = good;
    const auto at = bad.find("\"zero\"");
    bad.replace(at, 6, "\"cube\"");
    try {
      dboost::problem_from_json(bad);
      FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("cone") != std::string::npos);
    }
  }
  SUBCASE("ragged matrix rows") {
    CHECK_THROWS_AS(
        dboost::problem_from_json(R"({"format":"dboost-problem","version":1,
          "P":[[1,0],[0]], "c":[0,0], "A":[[1,1]], "b":[1],
          "cone":[{"kind":"zero","dim":1}]})"),
        std::invalid_argument);
  }
  SUBCASE("unsupported version") {
    std::string bad = good;
    const auto at = bad.find("\"version\": 1");
    bad.replace(at, 12, "\"version\": 9");
    CHECK_THROWS_AS(dboost::problem_from_json(bad), std::invalid_argument);
  }
}

TEST_CASE("malformed ensemble JSON is rejected") {
  dboost::Ensemble ens;
  ens.f0 = Eigen::VectorXd::Constant(2, 1.5);
  ens.loss_trace = {3.0};
  const std::string good = dboost::ensemble_to_json(ens);
  CHECK(good.find("dboost-ensemble") != std::string::npos);

  SUBCASE("format tag from the wrong family") {
    const QcpProblem p = dboost::motivating_problem();
    CHECK_THROWS_AS(dboost::ensemble_from_json(dboost::problem_to_json(p)),
                    std::invalid_argument);
  }
  SUBCASE("broken tree topology") {
    CHECK_THROWS_AS(dboost::ensemble_from_json(
                        R"({"format":"dboost-ensemble","version":1,"f0":[0.0],
             "stages":[{"beta":0.5,"tree":{"nodes":[
               {"feature":0,"threshold":0.5,"left":7,"right":2,"value":[]}
             ]}}],
             "loss_trace":[1.0],"stop_reason":"max_stages",
             "last_beta":0.5,"last_rel_change":0.1})"),
                    std::invalid_argument);
  }
  SUBCASE("bad stop reason token") {
    std::string bad = good;
    const auto at = bad.find("max_stages");
    REQUIRE(at != std::string::npos);
    bad.replace(at, 10, "gave_upppp");
    CHECK_THROWS_AS(dboost::ensemble_from_json(bad), std::invalid_argument);
  }
}

TEST_CASE("solution JSON carries the fields the solve command prints") {
  const auto sol = dboost::solve(dboost::motivating_problem());
  const auto res = dboost::kkt_residuals(dboost::motivating_problem(), sol);
  const std::string text = dboost::solution_to_json(sol, res);
  for (const char* key : {"\"format\"", "dboost-solution", "\"version\"", "\"z\"", "\"y\"",
                          "\"s\"", "\"iterations\"", "\"residuals\"", "\"primal\"",
                          "\"dual\"", "\"gap\""}) {
    CHECK(text.find(key) != std::string::npos);
  }
}

TEST_CASE("text files save and load verbatim") {
  const std::string path = "serialize_roundtrip_test.json";
  const std::string payload = "line one\nline two\n{\"x\": 1}\n";
  dboost::save_text_file(path, payload);
  CHECK(dboost::load_text_file(path) == payload);
  std::remove(path.c_str());
  CHECK_THROWS_AS(dboost::load_text_file("definitely_missing_file.json"),
                  std::runtime_error);
}
