#pragma once

#include <string>
#include <vector>

#include "gridsizer/milp.hpp"
#include "gridsizer/scenario.hpp"

namespace gridsizer {

enum class ModelKind { MGS, MGSIB, MGSNIB };

std::string model_name(ModelKind k);       // "MGS" / "MGS-IB" / "MGS-NIB"
std::string model_file_tag(ModelKind k);   // "mgs" / "mgs_ib" / "mgs_nib"
ModelKind model_kind_from_string(const std::string& s);  // CLI spellings
bool has_storage(ModelKind k);

// Raised by decode when a returned solution violates the stored model.
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Matrix = std::vector<std::vector<double>>;

// Variable handles for one built sizing model; matrices are [day][hour].
struct SizingVars {
    VarRef p_dg_max, s_pv;
    VarRef s_bess, e_init;  // invalid handles for MGS
    std::vector<std::vector<VarRef>> p_dg, u_dg, p_curt;
    std::vector<std::vector<VarRef>> p_chg, p_dchg, e_bess, u_chg, u_dchg;
};

struct SizingModel {
    ModelKind kind = ModelKind::MGS;
    int days = 0;
    int hours = 0;
    double alpha = 1.0;
    double big_m = 0.0;
    double deg_factor = 0.0;  // $/MWh discharged; nonzero only for MGS-NIB
    MILPModel model;
    SizingVars vars;
};

struct CostBreakdown {
    double dg_capital = 0.0;
    double pv_capital = 0.0;
    double bess_capital = 0.0;
    double dg_op_noload = 0.0;
    double pv_deg = 0.0;
    double bess_deg = 0.0;

    double total() const {
        return dg_capital + pv_capital + bess_capital + dg_op_noload + pv_deg + bess_deg;
    }
};

// Annualized energy aggregates (alpha-scaled representative sums), MWh/yr.
struct EnergySummary {
    double total_load = 0.0;
    double dg_energy = 0.0;
    double pv_energy_used = 0.0;
    double pv_curtailed = 0.0;
    double bess_charge = 0.0;
    double bess_discharge = 0.0;
};

struct Dispatch {
    Matrix p_dg, p_curt, u_dg;
    Matrix p_chg, p_dchg, u_chg, u_dchg;  // empty for MGS
};

struct SizingResult {
    ModelKind kind = ModelKind::MGS;
    double dg_size = 0.0;   // MW
    double pv_size = 0.0;   // MW
    double bess_size = 0.0; // MWh, zero for MGS
    double objective = 0.0;
    CostBreakdown cost;
    EnergySummary energy;
    Matrix soc;             // E_bess in MWh, [day][hour]; empty for MGS
    double e_init = 0.0;
    Dispatch dispatch;
    double alpha = 1.0;
    double deg_factor = 0.0;
    SolveStatus status = SolveStatus::Optimal;
    double mip_gap = 0.0;
    double solve_seconds = 0.0;
};

// Model builders, one per equation set. Inputs are immutable; builders are
// pure and deterministic (fixed registration order).
SizingModel build_mgs(const ScenarioParams& params, const Profiles& profiles);
SizingModel build_mgs_ib(const ScenarioParams& params, const Profiles& profiles);
SizingModel build_mgs_nib(const ScenarioParams& params, const Profiles& profiles,
                          double deg_factor);

// Extracts sizes, recomputed per-term costs, annual energy aggregates, SOC
// and dispatch from a solved model. Residual violation above 1e-6 raises
// IntegrityError; the cost breakdown is checked against the solver objective.
SizingResult decode(const SizingModel& sm, const Solution& sol, const ScenarioParams& params,
                    const Profiles& profiles);

// Fills cost breakdown and annual energy aggregates from sizes + dispatch
// already present in r (kind, alpha, deg_factor, sizes, dispatch matrices).
// Shared by decode and the report verifier; checks annual balance closure.
void recompute_derived(SizingResult& r, const ScenarioParams& params, const Matrix& load,
                       const Matrix& pv_unit);

}  // namespace gridsizer
