#include "gridsizer/ipoc.hpp"

#include <cmath>

namespace gridsizer {

std::string to_string(IpocTermination t) {
    switch (t) {
        case IpocTermination::DodRepeated: return "DodRepeated";
        case IpocTermination::Converged: return "Converged";
        case IpocTermination::MaxIterations: return "MaxIterations";
        case IpocTermination::BatteryUnused: return "BatteryUnused";
        case IpocTermination::SolveFailed: return "SolveFailed";
    }
    return "?";
}

IpocEvaluation evaluate_iteration(const SizingResult& sizing, const ScenarioParams& params,
                                  const CycleLifeCurve& curve) {
    IpocEvaluation ev;
    const double horizon = sizing.alpha * params.planning_years;
    ev.modeled_deg_cost = sizing.cost.bess_deg;

    const int days = static_cast<int>(sizing.soc.size());
    const auto traces =
        soc_fraction_traces(sizing.soc, sizing.e_init, sizing.bess_size, days == 365);
    for (const auto& trace : traces) {
        const CycleCount day_counts = count_cycles(trace, ev.counts.n_bins);
        for (int i = 0; i < ev.counts.n_bins; ++i)
            ev.counts.counts[static_cast<size_t>(i)] += day_counts.counts[static_cast<size_t>(i)];
    }

    if (ev.counts.empty()) {
        ev.battery_used = false;
        ev.actual_deg_cost = 0.0;
        ev.correction = -ev.modeled_deg_cost;
        ev.corrected_objective = sizing.objective - ev.modeled_deg_cost;
        return ev;
    }

    const DegFactorTable table = make_deg_factor_table(params, curve, ev.counts.n_bins);
    ev.battery_used = true;
    ev.actual_deg_cost = horizon * actual_deg_cost(ev.counts, table, sizing.bess_size);
    ev.correction = ev.actual_deg_cost - ev.modeled_deg_cost;
    ev.corrected_objective = sizing.objective - ev.modeled_deg_cost + ev.actual_deg_cost;
    ev.avg_dod = average_dod(ev.counts).value();
    return ev;
}

IpocReport run_ipoc(const ScenarioParams& params, const Profiles& profiles,
                    const CycleLifeCurve& curve, const IpocOptions& opts) {
    params.validate();
    profiles.validate();
    if (opts.max_iter < 1) throw std::domain_error("run_ipoc: max_iter must be >= 1");

    IpocReport report;
    std::vector<double> used_dods;
    double dod = params.dod_nominal;

    for (int k = 1; k <= opts.max_iter; ++k) {
        IpocIteration it;
        it.index = k;
        it.dod_used = dod;
        it.deg_factor_used = deg_factor(params, curve, dod);
        used_dods.push_back(dod);

        try {
            SizingModel sm = build_mgs_nib(params, profiles, it.deg_factor_used);
            Solution sol = solve(sm.model, opts.solve);
            if (sol.status != SolveStatus::Optimal && sol.status != SolveStatus::FeasibleGapLimited)
                throw SolverError("solve returned status " + to_string(sol.status));
            it.sizing = decode(sm, sol, params, profiles);
        } catch (const std::exception& e) {
            report.termination = IpocTermination::SolveFailed;
            report.error = "iteration " + std::to_string(k) + ": " + e.what();
            break;
        }

        const IpocEvaluation ev = evaluate_iteration(it.sizing, params, curve);
        it.modeled_deg_cost = ev.modeled_deg_cost;
        it.actual_deg_cost = ev.actual_deg_cost;
        it.correction = ev.correction;
        it.corrected_objective = ev.corrected_objective;
        it.avg_dod_measured = ev.avg_dod;
        report.iterations.push_back(std::move(it));
        const IpocIteration& done = report.iterations.back();

        if (!ev.battery_used) {
            report.termination = IpocTermination::BatteryUnused;
            break;
        }

        const double next_dod = ev.avg_dod;
        bool repeated = false;
        for (double u : used_dods)
            if (std::fabs(u - next_dod) < 1e-9) repeated = true;
        if (repeated) {
            report.termination = IpocTermination::DodRepeated;
            break;
        }
        if (report.iterations.size() >= 2) {
            const double prev =
                report.iterations[report.iterations.size() - 2].corrected_objective;
            const double delta = std::fabs(done.corrected_objective - prev);
            if (delta <= opts.obj_tol * std::max(1.0, std::fabs(done.corrected_objective))) {
                report.termination = IpocTermination::Converged;
                break;
            }
        }
        if (k == opts.max_iter) {
            report.termination = IpocTermination::MaxIterations;
            break;
        }
        dod = next_dod;
    }

    for (size_t i = 0; i < report.iterations.size(); ++i) {
        if (report.selected < 0 || report.iterations[i].corrected_objective <
                                       report.iterations[static_cast<size_t>(report.selected)]
                                           .corrected_objective)
            report.selected = static_cast<int>(i);
    }
    return report;
}

}  // namespace gridsizer
