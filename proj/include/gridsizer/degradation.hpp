#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gridsizer/scenario.hpp"

namespace gridsizer {

// Cycle histogram over DOD bins of width 1/n_bins; bin i covers
// (i/n, (i+1)/n] and is labeled by its upper edge. Half cycles count 0.5.
struct CycleCount {
    int n_bins = 10;
    std::vector<double> counts;  // size n_bins

    CycleCount() : counts(10, 0.0) {}
    explicit CycleCount(int bins) : n_bins(bins), counts(static_cast<size_t>(bins), 0.0) {}

    double dod_level(int bin) const { return static_cast<double>(bin + 1) / n_bins; }
    double total() const;
    bool empty() const { return total() == 0.0; }
};

// Per-bin degradation cost factors ($/MWh of rated capacity throughput).
struct DegFactorTable {
    int n_bins = 10;
    std::vector<double> factors;  // size n_bins, aligned with CycleCount bins

    double dod_level(int bin) const { return static_cast<double>(bin + 1) / n_bins; }
};

// Yearly PV degradation cost for an installed size, $/yr.
double pv_deg_cost(const ScenarioParams& params, double s_pv);

// Throughput penalty at a DOD level: capital * replacement fraction / cycle
// life, $/MWh discharged.
double deg_factor(const ScenarioParams& params, const CycleLifeCurve& curve, double dod);

DegFactorTable make_deg_factor_table(const ScenarioParams& params, const CycleLifeCurve& curve,
                                     int n_bins = 10);

// One extracted cycle: SOC range (the cycle's DOD) and its count weight.
struct ExtractedCycle {
    double range = 0.0;
    double weight = 1.0;  // 1 closed cycle, 0.5 residual half
};

// Four-point rainflow extraction over an SOC-fraction series. Closed cycles
// weigh 1, residual ranges 0.5. Fewer than 2 points yields nothing.
std::vector<ExtractedCycle> extract_cycles(std::span<const double> soc);

// Extraction binned to DOD levels (bin = ceil(range * n_bins), epsilon-guarded
// so exact edges stay put).
CycleCount count_cycles(std::span<const double> soc, int n_bins = 10);

// Cycle-resolved degradation cost: sum(count_i * factor_i * dod_i * s_bess).
double actual_deg_cost(const CycleCount& counts, const DegFactorTable& factors, double s_bess);

// Count-weighted mean DOD, snapped to the bin lattice. Empty count -> nullopt
// (battery unused).
std::optional<double> average_dod(const CycleCount& counts);

// SOC-fraction traces for cycle counting from an energy-level matrix
// [day][hour] in MWh. E_init leads each trace so day-boundary excursions are
// seen. concatenate_days=true yields one chronological year-long trace (full
// calendar resolution); false yields one trace per representative day.
// s_bess below 1e-6 MWh signals "no storage": returns no traces.
std::vector<std::vector<double>> soc_fraction_traces(
    const std::vector<std::vector<double>>& e_bess, double e_init, double s_bess,
    bool concatenate_days);

}  // namespace gridsizer
