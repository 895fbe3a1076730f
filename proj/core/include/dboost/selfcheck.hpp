// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#ifndef DBOOST_SELFCHECK_HPP_
#define DBOOST_SELFCHECK_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace dboost {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // Failure diagnostics; empty when passed.
};

// Runs the built-in invariant suite: cone projection laws (idempotence,
// Moreau decomposition, non-expansiveness), projection-Jacobian and loss-
// gradient finite-difference comparisons, fixed-point certificates on one
// instance per problem family, and determinism replays. Deterministic for a
// fixed seed; designed to finish in well under a minute.
std::vector<CheckResult> run_selfchecks(std::uint64_t seed = 20260819ULL);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace dboost

#endif  // DBOOST_SELFCHECK_HPP_
