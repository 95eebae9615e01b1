#include "gridsizer/sizing.hpp"

#include <cmath>
#include <cstdio>

namespace gridsizer {

std::string model_name(ModelKind k) {
    switch (k) {
        case ModelKind::MGS: return "MGS";
        case ModelKind::MGSIB: return "MGS-IB";
        case ModelKind::MGSNIB: return "MGS-NIB";
    }
    return "?";
}

std::string model_file_tag(ModelKind k) {
    switch (k) {
        case ModelKind::MGS: return "mgs";
        case ModelKind::MGSIB: return "mgs_ib";
        case ModelKind::MGSNIB: return "mgs_nib";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "mgs") return ModelKind::MGS;
    if (s == "mgs-ib" || s == "mgs_ib") return ModelKind::MGSIB;
    if (s == "mgs-nib" || s == "mgs_nib") return ModelKind::MGSNIB;
    throw ValidationError("unknown model '" + s + "' (expected mgs, mgs-ib, mgs-nib or all)");
}

bool has_storage(ModelKind k) { return k != ModelKind::MGS; }

namespace {

std::string cell(const char* prefix, int d, int t) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s_d%03d_t%02d", prefix, d + 1, t + 1);
    return buf;
}

std::string day_tag(const char* prefix, int d) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s_d%03d", prefix, d + 1);
    return buf;
}

// Shared skeleton for the three model kinds; `kind` selects the storage
// block and the degradation objective term.
SizingModel build(ModelKind kind, const ScenarioParams& params, const Profiles& profiles,
                  double deg_factor_value) {
    params.validate();
    profiles.validate();
    if (deg_factor_value < 0.0)
        throw std::domain_error("degradation factor must be >= 0, got " +
                                std::to_string(deg_factor_value));

    SizingModel sm;
    sm.kind = kind;
    sm.days = profiles.num_days();
    sm.hours = profiles.hours_per_day();
    sm.alpha = profiles.alpha;
    sm.big_m = effective_big_m(params, profiles);
    sm.deg_factor = deg_factor_value;

    MILPModel& m = sm.model;
    SizingVars& v = sm.vars;
    const int D = sm.days, T = sm.hours;
    const bool storage = has_storage(kind);
    const double horizon = profiles.alpha * params.planning_years;  // alpha * Y_MG

    v.p_dg_max = m.add_var("P_DG_max");
    v.s_pv = m.add_var("S_PV");
    if (storage) {
        v.s_bess = m.add_var("S_BESS");
        v.e_init = m.add_var("E_init");
    }

    auto grid = [D, T]() {
        return std::vector<std::vector<VarRef>>(static_cast<size_t>(D),
                                                std::vector<VarRef>(static_cast<size_t>(T)));
    };
    v.p_dg = grid();
    v.u_dg = grid();
    v.p_curt = grid();
    if (storage) {
        v.p_chg = grid();
        v.p_dchg = grid();
        v.e_bess = grid();
        v.u_chg = grid();
        v.u_dchg = grid();
    }
    for (int d = 0; d < D; ++d) {
        for (int t = 0; t < T; ++t) {
            v.p_dg[d][t] = m.add_var(cell("P_DG", d, t));
            v.u_dg[d][t] = m.add_binary(cell("U_DG", d, t));
            v.p_curt[d][t] = m.add_var(cell("P_curt", d, t));
            if (storage) {
                v.p_chg[d][t] = m.add_var(cell("P_chg", d, t));
                v.p_dchg[d][t] = m.add_var(cell("P_dchg", d, t));
                v.e_bess[d][t] = m.add_var(cell("E_BESS", d, t));
                v.u_chg[d][t] = m.add_binary(cell("U_chg", d, t));
                v.u_dchg[d][t] = m.add_binary(cell("U_dchg", d, t));
            }
        }
    }

    LinearExpr objective;
    objective.add(params.dg_capital, v.p_dg_max);
    // PV capital plus degradation: gamma * capital * deg_rate is a per-annum
    // cost, applied over the planning years (capital itself is one-time).
    objective.add(params.pv_capital +
                      params.pv_rep_frac * params.pv_capital * params.pv_deg_rate *
                          params.planning_years,
                  v.s_pv);
    if (storage) objective.add(params.bess_capital, v.s_bess);

    if (storage) {
        // initial energy level obeys the same SOC window as every period
        LinearExpr lo;
        lo.add(1.0, v.e_init);
        lo.add(-params.soc_min, v.s_bess);
        m.add_constraint("init_soc_lo", std::move(lo), Sense::GreaterEqual, 0.0);
        LinearExpr hi;
        hi.add(1.0, v.e_init);
        hi.add(-params.soc_max, v.s_bess);
        m.add_constraint("init_soc_hi", std::move(hi), Sense::LessEqual, 0.0);
    }

    for (int d = 0; d < D; ++d) {
        for (int t = 0; t < T; ++t) {
            objective.add(horizon * params.dg_op_cost, v.p_dg[d][t]);
            objective.add(horizon * params.dg_noload_cost, v.u_dg[d][t]);
            if (kind == ModelKind::MGSNIB)
                objective.add(horizon * deg_factor_value, v.p_dchg[d][t]);

            const double load = profiles.load[d][t];
            const double pv = profiles.pv_unit[d][t];

            // power balance: DG (+ discharge - charge) + used PV serves load
            LinearExpr balance;
            balance.add(1.0, v.p_dg[d][t]);
            balance.add(pv, v.s_pv);
            balance.add(-1.0, v.p_curt[d][t]);
            if (storage) {
                balance.add(1.0, v.p_dchg[d][t]);
                balance.add(-1.0, v.p_chg[d][t]);
            }
            m.add_constraint(cell("balance", d, t), std::move(balance), Sense::Equal, load);

            // minimum output; coupled to commitment unless the literal
            // always-on variant is requested
            LinearExpr dg_min;
            dg_min.add(1.0, v.p_dg[d][t]);
            if (!params.strict_dg_min) dg_min.add(-params.dg_pmin, v.u_dg[d][t]);
            m.add_constraint(cell("dg_min", d, t), std::move(dg_min), Sense::GreaterEqual,
                             params.strict_dg_min ? params.dg_pmin : 0.0);

            LinearExpr dg_bigm;
            dg_bigm.add(1.0, v.p_dg[d][t]);
            dg_bigm.add(-sm.big_m, v.u_dg[d][t]);
            m.add_constraint(cell("dg_bigm", d, t), std::move(dg_bigm), Sense::LessEqual, 0.0);

            LinearExpr dg_cap;
            dg_cap.add(1.0, v.p_dg[d][t]);
            dg_cap.add(-1.0, v.p_dg_max);
            m.add_constraint(cell("dg_cap", d, t), std::move(dg_cap), Sense::LessEqual, 0.0);

            // curtailment cannot exceed available production
            LinearExpr curt;
            curt.add(1.0, v.p_curt[d][t]);
            curt.add(-pv, v.s_pv);
            m.add_constraint(cell("curt_cap", d, t), std::move(curt), Sense::LessEqual, 0.0);

            if (!storage) continue;

            LinearExpr soc_lo;
            soc_lo.add(1.0, v.e_bess[d][t]);
            soc_lo.add(-params.soc_min, v.s_bess);
            m.add_constraint(cell("soc_lo", d, t), std::move(soc_lo), Sense::GreaterEqual, 0.0);

            LinearExpr soc_hi;
            soc_hi.add(1.0, v.e_bess[d][t]);
            soc_hi.add(-params.soc_max, v.s_bess);
            m.add_constraint(cell("soc_hi", d, t), std::move(soc_hi), Sense::LessEqual, 0.0);

            LinearExpr excl;
            excl.add(1.0, v.u_chg[d][t]);
            excl.add(1.0, v.u_dchg[d][t]);
            m.add_constraint(cell("excl", d, t), std::move(excl), Sense::LessEqual, 1.0);

            LinearExpr chg_bigm;
            chg_bigm.add(1.0, v.p_chg[d][t]);
            chg_bigm.add(-sm.big_m, v.u_chg[d][t]);
            m.add_constraint(cell("chg_bigm", d, t), std::move(chg_bigm), Sense::LessEqual, 0.0);

            LinearExpr chg_rate;
            chg_rate.add(1.0, v.p_chg[d][t]);
            chg_rate.add(-1.0 / params.t_chg, v.s_bess);
            m.add_constraint(cell("chg_rate", d, t), std::move(chg_rate), Sense::LessEqual, 0.0);

            LinearExpr dchg_bigm;
            dchg_bigm.add(1.0, v.p_dchg[d][t]);
            dchg_bigm.add(-sm.big_m, v.u_dchg[d][t]);
            m.add_constraint(cell("dchg_bigm", d, t), std::move(dchg_bigm), Sense::LessEqual, 0.0);

            LinearExpr dchg_rate;
            dchg_rate.add(1.0, v.p_dchg[d][t]);
            dchg_rate.add(-1.0 / params.t_dchg, v.s_bess);
            m.add_constraint(cell("dchg_rate", d, t), std::move(dchg_rate), Sense::LessEqual, 0.0);

            // energy recursion; every day starts from the shared E_init
            LinearExpr energy;
            energy.add(1.0, v.e_bess[d][t]);
            if (t == 0) {
                energy.add(-1.0, v.e_init);
            } else {
                energy.add(-1.0, v.e_bess[d][t - 1]);
            }
            energy.add(-params.eta, v.p_chg[d][t]);
            energy.add(1.0, v.p_dchg[d][t]);
            m.add_constraint(cell("energy", d, t), std::move(energy), Sense::Equal, 0.0);
        }

        // day-end anchoring: per day below full-year resolution, final day only
        // at full-year resolution
        if (storage && (D < 365 || d == D - 1)) {
            LinearExpr anchor;
            anchor.add(1.0, v.e_bess[d][T - 1]);
            anchor.add(-1.0, v.e_init);
            m.add_constraint(day_tag("anchor", d), std::move(anchor), Sense::Equal, 0.0);
        }
    }

    m.set_objective(std::move(objective));
    m.check();
    return sm;
}

}  // namespace

SizingModel build_mgs(const ScenarioParams& params, const Profiles& profiles) {
    return build(ModelKind::MGS, params, profiles, 0.0);
}

SizingModel build_mgs_ib(const ScenarioParams& params, const Profiles& profiles) {
    return build(ModelKind::MGSIB, params, profiles, 0.0);
}

SizingModel build_mgs_nib(const ScenarioParams& params, const Profiles& profiles,
                          double deg_factor) {
    return build(ModelKind::MGSNIB, params, profiles, deg_factor);
}

SizingResult decode(const SizingModel& sm, const Solution& sol, const ScenarioParams& params,
                    const Profiles& profiles) {
    if (sol.status != SolveStatus::Optimal && sol.status != SolveStatus::FeasibleGapLimited)
        throw IntegrityError("decode requires a solution with values, got status " +
                             to_string(sol.status));
    if (!sol.has_values()) throw IntegrityError("solution carries no values");

    const double residual = max_violation(sm.model, sol.values);
    if (residual > 1e-6)
        throw IntegrityError("solution violates model constraints by " + std::to_string(residual) +
                             " (solver/adapter fault)");

    const int D = sm.days, T = sm.hours;
    const bool storage = has_storage(sm.kind);

    SizingResult r;
    r.kind = sm.kind;
    r.alpha = sm.alpha;
    r.deg_factor = sm.deg_factor;
    r.status = sol.status;
    r.mip_gap = sol.mip_gap;
    r.solve_seconds = sol.solve_seconds;
    r.dg_size = sol.value(sm.vars.p_dg_max);
    r.pv_size = sol.value(sm.vars.s_pv);
    r.bess_size = storage ? sol.value(sm.vars.s_bess) : 0.0;
    r.e_init = storage ? sol.value(sm.vars.e_init) : 0.0;

    auto take = [&](const std::vector<std::vector<VarRef>>& refs) {
        Matrix out(static_cast<size_t>(D), std::vector<double>(static_cast<size_t>(T), 0.0));
        for (int d = 0; d < D; ++d)
            for (int t = 0; t < T; ++t) out[d][t] = sol.value(refs[d][t]);
        return out;
    };
    r.dispatch.p_dg = take(sm.vars.p_dg);
    r.dispatch.u_dg = take(sm.vars.u_dg);
    r.dispatch.p_curt = take(sm.vars.p_curt);
    if (storage) {
        r.dispatch.p_chg = take(sm.vars.p_chg);
        r.dispatch.p_dchg = take(sm.vars.p_dchg);
        r.dispatch.u_chg = take(sm.vars.u_chg);
        r.dispatch.u_dchg = take(sm.vars.u_dchg);
        r.soc = take(sm.vars.e_bess);
    }

    recompute_derived(r, params, profiles.load, profiles.pv_unit);

    r.objective = sol.objective_value;
    const double total = r.cost.total();
    if (std::fabs(total - r.objective) > 1e-6 * std::max(1.0, std::fabs(r.objective)))
        throw IntegrityError("cost breakdown " + std::to_string(total) +
                             " does not reproduce the solver objective " +
                             std::to_string(r.objective));
    return r;
}

void recompute_derived(SizingResult& r, const ScenarioParams& params, const Matrix& load,
                       const Matrix& pv_unit) {
    const bool storage = has_storage(r.kind);
    const double horizon = r.alpha * params.planning_years;
    const int D = static_cast<int>(r.dispatch.p_dg.size());
    const int T = D > 0 ? static_cast<int>(r.dispatch.p_dg[0].size()) : 0;

    double op_sum = 0.0, noload_sum = 0.0, dchg_sum = 0.0, chg_sum = 0.0;
    double load_sum = 0.0, curt_sum = 0.0, avail_sum = 0.0;
    for (int d = 0; d < D; ++d) {
        for (int t = 0; t < T; ++t) {
            op_sum += r.dispatch.p_dg[d][t];
            noload_sum += r.dispatch.u_dg[d][t];
            load_sum += load[d][t];
            curt_sum += r.dispatch.p_curt[d][t];
            avail_sum += pv_unit[d][t] * r.pv_size;
            if (storage) {
                chg_sum += r.dispatch.p_chg[d][t];
                dchg_sum += r.dispatch.p_dchg[d][t];
            }
        }
    }

    r.cost.dg_capital = params.dg_capital * r.dg_size;
    r.cost.pv_capital = params.pv_capital * r.pv_size;
    r.cost.bess_capital = storage ? params.bess_capital * r.bess_size : 0.0;
    r.cost.dg_op_noload =
        horizon * (params.dg_op_cost * op_sum + params.dg_noload_cost * noload_sum);
    r.cost.pv_deg = params.pv_rep_frac * params.pv_capital * r.pv_size * params.pv_deg_rate *
                    params.planning_years;
    r.cost.bess_deg = (r.kind == ModelKind::MGSNIB) ? horizon * r.deg_factor * dchg_sum : 0.0;

    r.energy.total_load = r.alpha * load_sum;
    r.energy.dg_energy = r.alpha * op_sum;
    r.energy.pv_curtailed = r.alpha * curt_sum;
    r.energy.pv_energy_used = r.alpha * (avail_sum - curt_sum);
    r.energy.bess_charge = r.alpha * chg_sum;
    r.energy.bess_discharge = r.alpha * dchg_sum;

    // annual balance closure, from the summed per-period balance rows
    const double closure = r.energy.dg_energy + r.energy.pv_energy_used +
                           r.energy.bess_discharge - r.energy.bess_charge;
    if (std::fabs(closure - r.energy.total_load) >
        1e-6 * std::max(1.0, std::fabs(r.energy.total_load)))
        throw IntegrityError("annual energy balance does not close");
}

}  // namespace gridsizer
