// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#include "dboost/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "json.hpp"

namespace dboost {
namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument(where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of rows");
  const size_t cols = j.front().is_array() ? j.front().size() : 0;
  if (cols == 0) fail(where, "expected non-empty rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < j.size(); ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.size() != cols) fail(where, "ragged rows");
    for (size_t k = 0; k < cols; ++k) {
      if (!row[k].is_number()) fail(where, "non-numeric entry");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k].get<double>();
    }
  }
  return m;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(where, "non-numeric entry");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

const char* cone_kind_token(ConeBlock::Kind kind) {
  switch (kind) {
    case ConeBlock::Kind::Zero:
      return "zero";
    case ConeBlock::Kind::NonNeg:
      return "nonneg";
    case ConeBlock::Kind::Soc:
      return "soc";
    case ConeBlock::Kind::Free:
      return "free";
  }
  throw std::logic_error("unknown cone kind");
}

ConeBlock::Kind cone_kind_from_token(const std::string& token, const std::string& where) {
  if (token == "zero") return ConeBlock::Kind::Zero;
  if (token == "nonneg") return ConeBlock::Kind::NonNeg;
  if (token == "soc") return ConeBlock::Kind::Soc;
  fail(where, "unknown cone kind '" + token + "'");
}

json parse(const std::string& text, const char* expected_format) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) fail(expected_format, "malformed JSON");
  if (!j.is_object()) fail(expected_format, "expected a JSON object");
  const json& format = field(j, "format", expected_format);
  if (!format.is_string() || format.get<std::string>() != expected_format) {
    fail(expected_format, "format tag mismatch");
  }
  const json& version = field(j, "version", expected_format);
  if (!version.is_number_integer() || version.get<int>() != 1) {
    fail(expected_format, "unsupported version");
  }
  return j;
}

}  // namespace

std::string problem_to_json(const QcpProblem& problem) {
  json j;
  j["format"] = "dboost-problem";
  j["version"] = 1;
  j["P"] = matrix_to_json(problem.P);
  j["c"] = vector_to_json(problem.c);
  j["A"] = matrix_to_json(problem.A);
  j["b"] = vector_to_json(problem.b);
  json cone = json::array();
  for (const ConeBlock& blk : problem.cone.blocks()) {
    cone.push_back(json{{"kind", cone_kind_token(blk.kind)}, {"dim", blk.dim}});
  }
  j["cone"] = std::move(cone);
  return j.dump(2) + "\n";
}

QcpProblem problem_from_json(const std::string& text) {
  const std::string where = "dboost-problem";
  const json j = parse(text, "dboost-problem");
  QcpProblem p;
  p.P = matrix_from_json(field(j, "P", where), where + ".P");
  p.c = vector_from_json(field(j, "c", where), where + ".c");
  p.A = matrix_from_json(field(j, "A", where), where + ".A");
  p.b = vector_from_json(field(j, "b", where), where + ".b");
  const json& cone = field(j, "cone", where);
  if (!cone.is_array() || cone.empty()) fail(where + ".cone", "expected a non-empty array");
  std::vector<ConeBlock> blocks;
  for (size_t i = 0; i < cone.size(); ++i) {
    const std::string at = where + ".cone[" + std::to_string(i) + "]";
    const json& blk = cone[i];
    if (!blk.is_object()) fail(at, "expected an object");
    const json& kind = field(blk, "kind", at);
    const json& dim = field(blk, "dim", at);
    if (!kind.is_string()) fail(at, "kind must be a string");
    if (!dim.is_number_integer() || dim.get<Eigen::Index>() < 1) {
      fail(at, "dim must be a positive integer");
    }
    blocks.push_back(ConeBlock{cone_kind_from_token(kind.get<std::string>(), at),
                               dim.get<Eigen::Index>()});
  }
  p.cone = ConeSpec(blocks);
  p.validate();  // Dimension and cone consistency.
  return p;
}

std::string ensemble_to_json(const Ensemble& ensemble) {
  json j;
  j["format"] = "dboost-ensemble";
  j["version"] = 1;
  j["f0"] = vector_to_json(ensemble.f0);
  json stages = json::array();
  for (const Ensemble::Stage& stage : ensemble.stages) {
    json nodes = json::array();
    for (const TreeNode& node : stage.tree.nodes()) {
      nodes.push_back(json{{"feature", node.feature},
                           {"threshold", node.threshold},
                           {"left", node.left},
                           {"right", node.right},
                           {"value", vector_to_json(node.value)}});
    }
    stages.push_back(json{{"beta", stage.beta}, {"tree", json{{"nodes", std::move(nodes)}}}});
  }
  j["stages"] = std::move(stages);
  j["loss_trace"] = ensemble.loss_trace;
  j["stop_reason"] = to_token(ensemble.stop_reason);
  j["last_beta"] = ensemble.last_beta;
  j["last_rel_change"] = ensemble.last_rel_change;
  return j.dump(2) + "\n";
}

Ensemble ensemble_from_json(const std::string& text) {
  const std::string where = "dboost-ensemble";
  const json j = parse(text, "dboost-ensemble");
  Ensemble ens;
  ens.f0 = vector_from_json(field(j, "f0", where), where + ".f0");
  const json& stages = field(j, "stages", where);
  if (!stages.is_array()) fail(where + ".stages", "expected an array");
  for (size_t si = 0; si < stages.size(); ++si) {
    const std::string at = where + ".stages[" + std::to_string(si) + "]";
    const json& stage = stages[si];
    const json& beta = field(stage, "beta", at);
    if (!beta.is_number()) fail(at, "beta must be a number");
    if (beta.get<double>() < 0.0) fail(at, "beta must be nonnegative");
    const json& nodes_json = field(field(stage, "tree", at), "nodes", at + ".tree");
    if (!nodes_json.is_array() || nodes_json.empty()) {
      fail(at + ".tree.nodes", "expected a non-empty array");
    }
    std::vector<TreeNode> nodes;
    const int count = static_cast<int>(nodes_json.size());
    for (size_t ni = 0; ni < nodes_json.size(); ++ni) {
      const std::string nat = at + ".tree.nodes[" + std::to_string(ni) + "]";
      const json& nj = nodes_json[ni];
      TreeNode node;
      node.feature = field(nj, "feature", nat).get<int>();
      node.threshold = field(nj, "threshold", nat).get<double>();
      node.left = field(nj, "left", nat).get<int>();
      node.right = field(nj, "right", nat).get<int>();
      node.value = vector_from_json(field(nj, "value", nat), nat + ".value");
      if (node.is_leaf()) {
        if (node.value.size() != ens.f0.size()) {
          fail(nat, "leaf value dimension does not match f0");
        }
      } else if (node.left < 0 || node.left >= count || node.right < 0 ||
                 node.right >= count) {
        fail(nat, "child index out of range");
      }
      nodes.push_back(std::move(node));
    }
    ens.stages.push_back(Ensemble::Stage{RegressionTree(std::move(nodes)),
                                         beta.get<double>()});
  }
  const json& trace = field(j, "loss_trace", where);
  if (!trace.is_array()) fail(where + ".loss_trace", "expected an array");
  for (const json& v : trace) {
    if (!v.is_number()) fail(where + ".loss_trace", "non-numeric entry");
    ens.loss_trace.push_back(v.get<double>());
  }
  ens.stop_reason =
      stop_reason_from_token(field(j, "stop_reason", where).get<std::string>());
  ens.last_beta = field(j, "last_beta", where).get<double>();
  ens.last_rel_change = field(j, "last_rel_change", where).get<double>();
  return ens;
}

std::string solution_to_json(const QcpSolution& solution, const KktResiduals& residuals) {
  json j;
  j["format"] = "dboost-solution";
  j["version"] = 1;
  j["z"] = vector_to_json(solution.z);
  j["y"] = vector_to_json(solution.y);
  j["s"] = vector_to_json(solution.s);
  j["iterations"] = solution.iterations;
  j["residuals"] = json{{"primal", residuals.primal},
                        {"dual", residuals.dual},
                        {"gap", residuals.gap}};
  return j.dump(2) + "\n";
}

std::string load_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) throw std::runtime_error("read failed: " + path);
  return buf.str();
}

void save_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace dboost
