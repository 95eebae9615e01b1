#pragma once

#include <string>
#include <vector>

#include "gridsizer/degradation.hpp"
#include "gridsizer/sizing.hpp"
#include "gridsizer/solver.hpp"

namespace gridsizer {

struct IpocOptions {
    int max_iter = 10;
    double obj_tol = 1e-4;  // relative, on successive corrected objectives
    SolveOptions solve;
};

enum class IpocTermination { DodRepeated, Converged, MaxIterations, BatteryUnused, SolveFailed };

std::string to_string(IpocTermination t);

struct IpocIteration {
    int index = 0;               // 1-based
    double dod_used = 0.0;       // penalty DOD for this solve
    double deg_factor_used = 0.0;
    double modeled_deg_cost = 0.0;   // throughput-penalty term over the horizon
    double actual_deg_cost = 0.0;    // cycle-resolved cost over the horizon
    double correction = 0.0;         // actual - modeled
    double corrected_objective = 0.0;
    double avg_dod_measured = 0.0;   // snapped to the bin lattice; 0 if unused
    SizingResult sizing;
};

struct IpocReport {
    std::vector<IpocIteration> iterations;
    IpocTermination termination = IpocTermination::MaxIterations;
    int selected = -1;  // index into iterations of the minimum corrected objective
    std::string error;  // non-empty when termination == SolveFailed
};

// Degradation bookkeeping for one solved sizing: cycle counts over the SOC
// trajectory, cycle-resolved cost, correction against the modeled term.
// Exposed for fixtures and the report verifier.
struct IpocEvaluation {
    CycleCount counts;
    double modeled_deg_cost = 0.0;
    double actual_deg_cost = 0.0;
    double correction = 0.0;
    double corrected_objective = 0.0;
    bool battery_used = false;
    double avg_dod = 0.0;
};
IpocEvaluation evaluate_iteration(const SizingResult& sizing, const ScenarioParams& params,
                                  const CycleLifeCurve& curve);

// Iterative degradation-cost correction: solve the non-ideal storage model,
// count realized cycles, re-price degradation, update the penalty DOD from
// the average realized DOD, repeat until the DOD revisits a used value, the
// corrected objective converges, the battery goes unused, or max_iter.
IpocReport run_ipoc(const ScenarioParams& params, const Profiles& profiles,
                    const CycleLifeCurve& curve, const IpocOptions& opts = {});

}  // namespace gridsizer
