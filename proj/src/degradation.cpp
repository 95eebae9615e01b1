#include "gridsizer/degradation.hpp"

#include <cmath>
#include <stdexcept>

namespace gridsizer {

double CycleCount::total() const {
    double s = 0.0;
    for (double c : counts) s += c;
    return s;
}

double pv_deg_cost(const ScenarioParams& params, double s_pv) {
    if (s_pv < 0.0) throw std::domain_error("pv_deg_cost: s_pv must be >= 0");
    return params.pv_rep_frac * params.pv_capital * s_pv * params.pv_deg_rate;
}

double deg_factor(const ScenarioParams& params, const CycleLifeCurve& curve, double dod) {
    return params.bess_capital * params.bess_rep_frac / cycle_life_at(curve, dod);
}

DegFactorTable make_deg_factor_table(const ScenarioParams& params, const CycleLifeCurve& curve,
                                     int n_bins) {
    if (n_bins < 1) throw std::domain_error("make_deg_factor_table: n_bins must be >= 1");
    DegFactorTable table;
    table.n_bins = n_bins;
    table.factors.resize(static_cast<size_t>(n_bins));
    for (int i = 0; i < n_bins; ++i)
        table.factors[static_cast<size_t>(i)] = deg_factor(params, curve, table.dod_level(i));
    return table;
}

namespace {

// Collapses a series to its turning points (plateaus removed, endpoints kept).
std::vector<double> turning_points(std::span<const double> series) {
    std::vector<double> tp;
    tp.reserve(series.size());
    for (double v : series) {
        if (!tp.empty() && v == tp.back()) continue;
        if (tp.size() >= 2) {
            const double a = tp[tp.size() - 2], b = tp.back();
            if ((b - a > 0) == (v - b > 0)) {
                tp.back() = v;  // same direction, extend
                continue;
            }
        }
        tp.push_back(v);
    }
    return tp;
}

void add_range(CycleCount& out, double range, double weight) {
    if (range <= 0.0) return;
    // epsilon keeps exact bin-edge depths (e.g. 0.8 with 10 bins) in their bin
    int bin = static_cast<int>(std::ceil(range * out.n_bins - 1e-9)) - 1;
    if (bin < 0) bin = 0;
    if (bin >= out.n_bins) bin = out.n_bins - 1;
    out.counts[static_cast<size_t>(bin)] += weight;
}

}  // namespace

std::vector<ExtractedCycle> extract_cycles(std::span<const double> soc) {
    std::vector<ExtractedCycle> cycles;
    if (soc.size() < 2) return cycles;
    for (double v : soc) {
        if (!(v >= -1e-6 && v <= 1.0 + 1e-6))
            throw std::domain_error("SOC value outside [0,1]: " + std::to_string(v));
    }

    // Four-point method: with the last four stack points A,B,C,D, the inner
    // range B-C closes a full cycle when it is no larger than both neighbors.
    std::vector<double> tp = turning_points(soc);
    std::vector<double> stack;
    stack.reserve(tp.size());
    for (double v : tp) {
        stack.push_back(v);
        while (stack.size() >= 4) {
            const size_t n = stack.size();
            const double outer_left = std::fabs(stack[n - 3] - stack[n - 4]);
            const double inner = std::fabs(stack[n - 2] - stack[n - 3]);
            const double outer_right = std::fabs(stack[n - 1] - stack[n - 2]);
            if (inner <= outer_left && inner <= outer_right) {
                if (inner > 0.0) cycles.push_back({inner, 1.0});
                stack.erase(stack.end() - 3, stack.end() - 1);  // drop B, C
            } else {
                break;
            }
        }
    }
    // Residual: each remaining adjacent range is an unpaired half cycle.
    for (size_t i = 0; i + 1 < stack.size(); ++i) {
        const double range = std::fabs(stack[i + 1] - stack[i]);
        if (range > 0.0) cycles.push_back({range, 0.5});
    }
    return cycles;
}

CycleCount count_cycles(std::span<const double> soc, int n_bins) {
    if (n_bins < 1) throw std::domain_error("count_cycles: n_bins must be >= 1");
    CycleCount out(n_bins);
    for (const ExtractedCycle& c : extract_cycles(soc)) add_range(out, c.range, c.weight);
    return out;
}

double actual_deg_cost(const CycleCount& counts, const DegFactorTable& factors, double s_bess) {
    if (counts.n_bins != factors.n_bins)
        throw std::domain_error("actual_deg_cost: count and factor bins are misaligned");
    if (s_bess < 0.0) throw std::domain_error("actual_deg_cost: s_bess must be >= 0");
    double cost = 0.0;
    for (int i = 0; i < counts.n_bins; ++i)
        cost += counts.counts[static_cast<size_t>(i)] * factors.factors[static_cast<size_t>(i)] *
                counts.dod_level(i) * s_bess;
    return cost;
}

std::vector<std::vector<double>> soc_fraction_traces(
    const std::vector<std::vector<double>>& e_bess, double e_init, double s_bess,
    bool concatenate_days) {
    std::vector<std::vector<double>> traces;
    if (s_bess < 1e-6 || e_bess.empty()) return traces;
    if (concatenate_days) {
        std::vector<double> trace;
        trace.reserve(e_bess.size() * e_bess[0].size() + 1);
        trace.push_back(e_init / s_bess);
        for (const auto& day : e_bess)
            for (double e : day) trace.push_back(e / s_bess);
        traces.push_back(std::move(trace));
    } else {
        for (const auto& day : e_bess) {
            std::vector<double> trace;
            trace.reserve(day.size() + 1);
            trace.push_back(e_init / s_bess);
            for (double e : day) trace.push_back(e / s_bess);
            traces.push_back(std::move(trace));
        }
    }
    return traces;
}

std::optional<double> average_dod(const CycleCount& counts) {
    const double total = counts.total();
    if (total <= 0.0) return std::nullopt;
    double weighted = 0.0;
    for (int i = 0; i < counts.n_bins; ++i)
        weighted += counts.counts[static_cast<size_t>(i)] * counts.dod_level(i);
    const double mean = weighted / total;
    // snap to the bin lattice (10% granularity by default)
    double snapped = std::llround(mean * counts.n_bins) / static_cast<double>(counts.n_bins);
    if (snapped < 1.0 / counts.n_bins) snapped = 1.0 / counts.n_bins;
    if (snapped > 1.0) snapped = 1.0;
    return snapped;
}

}  // namespace gridsizer
