// Test-only dense LP solver: two-phase primal simplex with Bland's rule.
// Independent oracle for the brute-force MILP enumeration checks; never used
// by the library itself.
#pragma once

#include <vector>

namespace oracle {

enum class LpStatus { Optimal, Infeasible, Unbounded };

// One row: sum(coefs[j] * x[j]) sense rhs, with sense -1/0/+1 for <=/=/>=.
struct LpRow {
    std::vector<double> coefs;
    int sense = 0;
    double rhs = 0.0;
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

// Minimizes c'x subject to the rows and x >= 0.
LpResult solve_lp(const std::vector<double>& c, const std::vector<LpRow>& rows);

}  // namespace oracle
