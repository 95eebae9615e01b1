#pragma once

#include <string>

#include "gridsizer/milp.hpp"

namespace gridsizer {

// Defaults mirror the reference runs: gap 0.0, 12-hour limit.
struct SolveOptions {
    double mip_gap = 0.0;
    double time_limit = 43200.0;  // seconds
};

// Raised when no usable solver backend is configured or reachable.
class SolverConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when the backend starts but fails to produce a usable answer.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Backend name from GRIDSIZER_SOLVER (default "highs").
std::string solver_backend_name();

// Solves the model through the configured backend. Statuses:
//   Optimal            proven optimal (zero remaining gap)
//   FeasibleGapLimited incumbent returned with a nonzero gap (gap or time stop)
//   TimeLimit          stopped with no incumbent
//   Infeasible / Unbounded as reported
// Incumbent values are returned for Optimal and FeasibleGapLimited.
Solution solve(const MILPModel& model, const SolveOptions& opts = {});

}  // namespace gridsizer
