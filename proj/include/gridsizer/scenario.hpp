#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gridsizer {

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ResolutionMode { Full365, Typical12, Single1 };

ResolutionMode resolution_from_string(const std::string& s);  // "365day"|"12day"|"1day"
std::string to_string(ResolutionMode m);
int resolution_days(ResolutionMode m);
double resolution_alpha(ResolutionMode m);  // 1 / 30.42 / 365

// Cost, efficiency, SOC and horizon parameters. Defaults are the bundled
// PV / NG generator / LFP pack characteristics.
struct ScenarioParams {
    double dg_op_cost = 44.75;       // $/MWh
    double dg_noload_cost = 5.25;    // $/h while committed
    double dg_capital = 1150000.0;   // $/MW
    double pv_capital = 1450000.0;   // $/MW
    double pv_rep_frac = 0.41;       // replacement cost as fraction of capital
    double pv_deg_rate = 0.01;       // fraction per annum
    double bess_capital = 469000.0;  // $/MWh
    double bess_rep_frac = 0.79;
    double t_chg = 1.0;              // h to full charge at max power
    double t_dchg = 1.0;
    double eta = 0.90;               // roundtrip efficiency, applied on charge
    double soc_min = 0.10;
    double soc_max = 0.90;
    double dod_nominal = 0.80;       // initial degradation penalty DOD
    double dg_pmin = 0.05;           // MW
    int planning_years = 25;
    double big_m = 0.0;              // MW; 0 = derive as 10x peak load
    bool strict_dg_min = false;      // literal minimum-output constraint variant
    double u_dg_init = 0.0;          // accepted for config compatibility; unused

    void validate() const;  // field-level invariants (profile coupling checked separately)
};

// Hourly load (MW) and per-MW PV production (fraction), [day][hour].
// CSV ingestion enforces 24 hours/day; in-memory construction may use any
// hour count (small fixtures).
struct Profiles {
    std::vector<std::vector<double>> load;
    std::vector<std::vector<double>> pv_unit;
    double alpha = 1.0;  // yearly repetitions of the representative set

    int num_days() const { return static_cast<int>(load.size()); }
    int hours_per_day() const { return load.empty() ? 0 : static_cast<int>(load[0].size()); }
    double peak_load() const;
    double total_load() const;  // representative-set sum, MWh

    void validate() const;
};

// DOD-percent -> cycles-to-failure, piecewise linear between knots.
struct CycleLifeCurve {
    std::vector<std::pair<double, double>> knots;  // (dod %, cycles), strictly ordered

    static CycleLifeCurve table_default();
    void validate() const;
};

// CSV columns day,hour,value; hours 1..24; identical day sets across files.
// Errors carry (day,hour) positions.
Profiles load_profiles(const std::string& load_path, const std::string& pv_path);

// 365-day calendar profile -> monthly representative days (Typical12, alpha
// 30.42) or a single mean day (Single1, alpha 365). Hour-wise arithmetic
// means over a non-leap calendar. Coarser inputs are rejected.
Profiles resample(const Profiles& p, ResolutionMode mode);

// Cycle life at a DOD fraction in (0,1]; clamps below the first knot.
double cycle_life_at(const CycleLifeCurve& curve, double dod);

// Flat key=value parameter file mirroring ScenarioParams field names;
// optional cycle_life knot override. Unknown keys are rejected.
struct ScenarioConfig {
    ScenarioParams params;
    CycleLifeCurve curve = CycleLifeCurve::table_default();
};
ScenarioConfig load_params(const std::string& path);

// Finalizes BigM against a profile set: explicit value is validated against
// peak load, 0 derives 10x peak.
double effective_big_m(const ScenarioParams& params, const Profiles& profiles);

}  // namespace gridsizer
