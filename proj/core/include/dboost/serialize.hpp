// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#ifndef DBOOST_SERIALIZE_HPP_
#define DBOOST_SERIALIZE_HPP_

#include <string>

#include "dboost/boosting.hpp"
#include "dboost/qcp.hpp"

namespace dboost {

// JSON round-trips for the two stable external formats. Matrices are dense
// row-major arrays-of-arrays; doubles use shortest round-trip formatting.
//
// Problem files ("format": "dboost-problem", "version": 1):
//   {"P": [[...]], "c": [...], "A": [[...]], "b": [...],
//    "cone": [{"kind": "zero"|"nonneg"|"soc", "dim": n}, ...]}
//
// Ensemble files ("format": "dboost-ensemble", "version": 1):
//   {"f0": [...], "stages": [{"beta": b, "tree": {"nodes": [
//      {"feature": f, "threshold": t, "left": l, "right": r, "value": [...]}
//    ]}}], "loss_trace": [...], "stop_reason": token,
//    "last_beta": b, "last_rel_change": r}
//
// from_* functions validate the format tag, version, dimensions, and tree
// topology, throwing std::invalid_argument with a field path on mismatch.

std::string problem_to_json(const QcpProblem& problem);
QcpProblem problem_from_json(const std::string& text);

std::string ensemble_to_json(const Ensemble& ensemble);
Ensemble ensemble_from_json(const std::string& text);

// Solver output for the one-off solve command: z, y, s, iteration count and
// KKT residuals ("format": "dboost-solution", "version": 1).
std::string solution_to_json(const QcpSolution& solution, const KktResiduals& residuals);

// Whole-file helpers; throw std::runtime_error with the path on I/O failure.
std::string load_text_file(const std::string& path);
void save_text_file(const std::string& path, const std::string& content);

}  // namespace dboost

#endif  // DBOOST_SERIALIZE_HPP_
