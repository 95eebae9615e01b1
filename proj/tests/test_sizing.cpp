#include <doctest.h>

#include <cmath>

#include "gridsizer/degradation.hpp"
#include "gridsizer/sizing.hpp"
#include "gridsizer/solver.hpp"

using namespace gridsizer;

namespace {

Profiles profile_1day(std::vector<double> load, std::vector<double> pv, double alpha = 365.0) {
    Profiles p;
    p.load.push_back(std::move(load));
    p.pv_unit.push_back(std::move(pv));
    p.alpha = alpha;
    return p;
}

ScenarioParams small_params() {
    ScenarioParams params;
    params.dg_pmin = 0.0;
    params.big_m = 0.0;
    return params;
}

// replays the energy recursion from e_init and the dispatched flows
double recursion_residual(const SizingResult& r, const ScenarioParams& params) {
    double worst = 0.0;
    for (size_t d = 0; d < r.soc.size(); ++d) {
        double e = r.e_init;
        for (size_t t = 0; t < r.soc[d].size(); ++t) {
            e += params.eta * r.dispatch.p_chg[d][t] - r.dispatch.p_dchg[d][t];
            worst = std::max(worst, std::fabs(e - r.soc[d][t]));
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("build_mgs: variable and constraint inventory") {
    ScenarioParams params = small_params();
    Profiles p = profile_1day({0.5, 0.6}, {0.1, 0.2});
    SizingModel sm = build_mgs(params, p);
    // 2 scalars + 3 per period
    CHECK(sm.model.num_vars() == 2 + 3 * 2);
    CHECK(sm.model.num_binaries() == 2);
    // 5 rows per period
    CHECK(sm.model.constraints().size() == 5 * 2);
    CHECK(sm.big_m == doctest::Approx(6.0));
}

TEST_CASE("build_mgs_ib adds the storage block and daily anchoring") {
    ScenarioParams params = small_params();
    Profiles p = profile_1day({0.5, 0.6, 0.4}, {0.1, 0.2, 0.0});
    SizingModel sm = build_mgs_ib(params, p);
    CHECK(sm.model.num_vars() == 4 + 8 * 3);
    CHECK(sm.model.num_binaries() == 3 * 3);
    // 2 init rows + 13 per period + 1 anchor
    CHECK(sm.model.constraints().size() == 2 + 13 * 3 + 1);
}

TEST_CASE("zero load costs nothing to serve") {
    ScenarioParams params = small_params();
    Profiles p = profile_1day({0.0, 0.0, 0.0, 0.0}, {0.0, 0.5, 0.9, 0.2});
    for (int which = 0; which < 3; ++which) {
        SizingModel sm = which == 0   ? build_mgs(params, p)
                         : which == 1 ? build_mgs_ib(params, p)
                                      : build_mgs_nib(params, p, 123.5);
        Solution sol = solve(sm.model);
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(sol.objective_value == doctest::Approx(0.0).epsilon(1e-9));
        SizingResult r = decode(sm, sol, params, p);
        CHECK(r.pv_size == doctest::Approx(0.0));
        CHECK(r.dg_size == doctest::Approx(0.0));
    }
}

TEST_CASE("single period, 1 MW load, no sun: one-variable arithmetic oracle") {
    ScenarioParams params = small_params();
    Profiles p = profile_1day({1.0}, {0.0});
    params.planning_years = 1;
    SizingModel sm = build_mgs(params, p);
    Solution sol = solve(sm.model);
    REQUIRE(sol.status == SolveStatus::Optimal);
    // alpha*Y*(C_op + C_nl) + C_DG_capital
    const double expected = 365.0 * 1.0 * (44.75 + 5.25) + 1150000.0;
    CHECK(sol.objective_value == doctest::Approx(expected).epsilon(1e-9));
    SizingResult r = decode(sm, sol, params, p);
    CHECK(r.dg_size == doctest::Approx(1.0));
    CHECK(r.dispatch.u_dg[0][0] == doctest::Approx(1.0));
}

TEST_CASE("storage priced out reduces MGS-IB to the MGS optimum") {
    ScenarioParams params = small_params();
    params.bess_capital = 1e12;
    Profiles p = profile_1day({0.3, 0.7, 0.5, 0.2}, {0.0, 0.6, 0.3, 0.0});
    SizingModel ib = build_mgs_ib(params, p);
    Solution ib_sol = solve(ib.model);
    REQUIRE(ib_sol.status == SolveStatus::Optimal);
    SizingResult ib_res = decode(ib, ib_sol, params, p);
    CHECK(ib_res.bess_size == doctest::Approx(0.0).epsilon(1e-9));

    ScenarioParams base = small_params();
    SizingModel mgs = build_mgs(base, p);
    Solution mgs_sol = solve(mgs.model);
    REQUIRE(mgs_sol.status == SolveStatus::Optimal);
    CHECK(ib_sol.objective_value == doctest::Approx(mgs_sol.objective_value).epsilon(1e-9));
}

TEST_CASE("flat load and no sun leaves the battery unused") {
    ScenarioParams params = small_params();
    Profiles p = profile_1day({0.4, 0.4, 0.4, 0.4}, {0.0, 0.0, 0.0, 0.0});
    SizingModel ib = build_mgs_ib(params, p);
    Solution free_sol = solve(ib.model);
    REQUIRE(free_sol.status == SolveStatus::Optimal);

    // force S_BESS = 0 and compare: the optimum cannot be worse without it
    SizingModel forced = build_mgs_ib(params, p);
    LinearExpr pin;
    pin.add(1.0, forced.vars.s_bess);
    forced.model.add_constraint("pin_bess", std::move(pin), Sense::LessEqual, 0.0);
    Solution forced_sol = solve(forced.model);
    REQUIRE(forced_sol.status == SolveStatus::Optimal);
    CHECK(free_sol.objective_value == doctest::Approx(forced_sol.objective_value).epsilon(1e-9));
    SizingResult r = decode(ib, free_sol, params, p);
    CHECK(r.energy.bess_discharge == doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("mgs-nib with zero factor is coefficient-equal to mgs-ib") {
    ScenarioParams params = small_params();
    Profiles p = profile_1day({0.3, 0.8}, {0.5, 0.0});
    SizingModel ib = build_mgs_ib(params, p);
    SizingModel nib = build_mgs_nib(params, p, 0.0);
    REQUIRE(ib.model.num_vars() == nib.model.num_vars());
    const auto& oa = ib.model.objective().terms();
    const auto& ob = nib.model.objective().terms();
    REQUIRE(oa.size() == ob.size());
    for (size_t i = 0; i < oa.size(); ++i) {
        CHECK(oa[i].var.id == ob[i].var.id);
        CHECK(oa[i].coef == doctest::Approx(ob[i].coef));
    }
    CHECK_THROWS_AS(build_mgs_nib(params, p, -1.0), std::domain_error);
}

TEST_CASE("nib degradation term prices every discharged MWh") {
    ScenarioParams params = small_params();
    // big evening load, free midday PV: the battery shifts energy
    Profiles p = profile_1day({0.1, 0.1, 0.8, 0.8}, {0.9, 0.9, 0.0, 0.0});
    const double factor = deg_factor(params, CycleLifeCurve::table_default(), 0.8);
    SizingModel nib = build_mgs_nib(params, p, factor);
    Solution sol = solve(nib.model);
    REQUIRE(sol.status == SolveStatus::Optimal);
    SizingResult r = decode(nib, sol, params, p);
    const double horizon = p.alpha * params.planning_years;
    CHECK(r.cost.bess_deg ==
          doctest::Approx(horizon * factor * r.energy.bess_discharge / p.alpha).epsilon(1e-9));
}

TEST_CASE("solved storage dispatch satisfies the physical invariants") {
    ScenarioParams params = small_params();
    params.dg_pmin = 0.05;
    Profiles p = profile_1day({0.2, 0.15, 0.6, 0.75, 0.5, 0.2},
                              {0.4, 0.8, 0.3, 0.0, 0.0, 0.0});
    SizingModel sm = build_mgs_ib(params, p);
    Solution sol = solve(sm.model);
    REQUIRE(sol.status == SolveStatus::Optimal);
    SizingResult r = decode(sm, sol, params, p);

    CHECK(recursion_residual(r, params) <= 1e-6);
    // anchoring: single representative day ends at the initial level
    CHECK(std::fabs(r.soc[0].back() - r.e_init) <= 1e-6);
    for (size_t t = 0; t < r.soc[0].size(); ++t) {
        CHECK(r.soc[0][t] >= params.soc_min * r.bess_size - 1e-6);
        CHECK(r.soc[0][t] <= params.soc_max * r.bess_size + 1e-6);
        // non-simultaneous charge/discharge
        CHECK(r.dispatch.p_chg[0][t] * r.dispatch.p_dchg[0][t] <= 1e-9);
        CHECK(r.dispatch.u_chg[0][t] + r.dispatch.u_dchg[0][t] <= 1.0 + 1e-6);
        // curtailment within available production
        CHECK(r.dispatch.p_curt[0][t] >= -1e-9);
        CHECK(r.dispatch.p_curt[0][t] <= p.pv_unit[0][t] * r.pv_size + 1e-6);
        // DG caps
        CHECK(r.dispatch.p_dg[0][t] <= r.dg_size + 1e-6);
        CHECK(r.dispatch.p_dg[0][t] <= sm.big_m * r.dispatch.u_dg[0][t] + 1e-6);
        // minimum output coupling
        CHECK(r.dispatch.p_dg[0][t] >= params.dg_pmin * r.dispatch.u_dg[0][t] - 1e-6);
    }
}

TEST_CASE("strict minimum-output mode keeps the generator always on") {
    ScenarioParams params = small_params();
    params.dg_pmin = 0.05;
    params.strict_dg_min = true;
    Profiles p = profile_1day({0.05, 0.3, 0.5, 0.1}, {0.0, 0.9, 0.9, 0.0});
    SizingModel sm = build_mgs(params, p);
    Solution sol = solve(sm.model);
    REQUIRE(sol.status == SolveStatus::Optimal);
    SizingResult r = decode(sm, sol, params, p);
    for (size_t t = 0; t < 4; ++t) {
        CHECK(r.dispatch.p_dg[0][t] >= 0.05 - 1e-9);
        CHECK(r.dispatch.u_dg[0][t] == doctest::Approx(1.0));
    }

    // the coupled default may switch the generator off
    params.strict_dg_min = false;
    SizingModel coupled = build_mgs(params, p);
    Solution c_sol = solve(coupled.model);
    REQUIRE(c_sol.status == SolveStatus::Optimal);
    CHECK(c_sol.objective_value <= sol.objective_value * (1 + 1e-9));
}

TEST_CASE("decode cross-checks: curtailment identity and breakdown sum") {
    ScenarioParams params = small_params();
    Profiles p = profile_1day({0.2, 0.6, 0.7, 0.3}, {0.9, 0.7, 0.1, 0.0});
    SizingModel sm = build_mgs(params, p);
    Solution sol = solve(sm.model);
    REQUIRE(sol.status == SolveStatus::Optimal);
    SizingResult r = decode(sm, sol, params, p);

    // curtailed + used = available, all alpha-scaled
    double avail = 0.0;
    for (size_t t = 0; t < 4; ++t) avail += p.pv_unit[0][t] * r.pv_size;
    CHECK(r.energy.pv_curtailed + r.energy.pv_energy_used ==
          doctest::Approx(p.alpha * avail).epsilon(1e-9));
    CHECK(r.cost.total() == doctest::Approx(r.objective).epsilon(1e-9));
    CHECK(r.cost.bess_capital == doctest::Approx(0.0));
    CHECK(r.soc.empty());

    // decode rejects tampered solutions
    Solution bad = sol;
    bad.values[2] += 0.5;  // first per-period P_DG
    CHECK_THROWS_AS(decode(sm, bad, params, p), IntegrityError);
}

TEST_CASE("full-year storage model anchors only the final day") {
    ScenarioParams params = small_params();
    Profiles p;
    p.load.assign(365, std::vector<double>(2, 0.3));
    p.pv_unit.assign(365, std::vector<double>(2, 0.1));
    p.alpha = 1.0;
    SizingModel sm = build_mgs_ib(params, p);
    int anchors = 0;
    std::string last;
    for (const auto& c : sm.model.constraints()) {
        if (c.name.rfind("anchor", 0) == 0) {
            ++anchors;
            last = c.name;
        }
    }
    CHECK(anchors == 1);
    CHECK(last == "anchor_d365");

    // below full-year resolution every day is anchored
    Profiles p12;
    p12.load.assign(12, std::vector<double>(2, 0.3));
    p12.pv_unit.assign(12, std::vector<double>(2, 0.1));
    p12.alpha = 30.42;
    SizingModel sm12 = build_mgs_ib(params, p12);
    int anchors12 = 0;
    for (const auto& c : sm12.model.constraints())
        if (c.name.rfind("anchor", 0) == 0) ++anchors12;
    CHECK(anchors12 == 12);
}

TEST_CASE("objective ordering holds on a storage-friendly day") {
    ScenarioParams params = small_params();
    Profiles p = profile_1day({0.15, 0.1, 0.2, 0.7, 0.8, 0.3},
                              {0.5, 0.9, 0.8, 0.1, 0.0, 0.0});
    const double factor = deg_factor(params, CycleLifeCurve::table_default(), 0.8);
    Solution mgs = solve(build_mgs(params, p).model);
    Solution ib = solve(build_mgs_ib(params, p).model);
    Solution nib = solve(build_mgs_nib(params, p, factor).model);
    REQUIRE(mgs.status == SolveStatus::Optimal);
    REQUIRE(ib.status == SolveStatus::Optimal);
    REQUIRE(nib.status == SolveStatus::Optimal);
    CHECK(ib.objective_value <= nib.objective_value * (1 + 1e-9));
    CHECK(nib.objective_value <= mgs.objective_value * (1 + 1e-9));
}
