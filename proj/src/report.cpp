#include "gridsizer/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace gridsizer {

namespace {

using Grid = std::vector<std::vector<std::string>>;

std::string musd(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v / 1e6);
    return buf;
}

std::string pct(double fraction) { return fmt_double(fraction * 100.0); }

std::string grid_to_csv(const Grid& grid) {
    std::string out;
    for (const auto& row : grid) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << content;
    if (!out) throw ValidationError("write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Grid parse_csv(const std::string& text) {
    Grid grid;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        if (line.back() == ',') row.push_back("");
        grid.push_back(std::move(row));
    }
    return grid;
}

// ---- table builders (shared by the emitter and the verifier) ----

Grid cost_table(const std::vector<SizingResult>& results) {
    Grid g;
    std::vector<std::string> header{"attribute"};
    for (const auto& r : results) header.push_back(model_file_tag(r.kind));
    g.push_back(header);

    auto row = [&](const std::string& name, auto getter) {
        std::vector<std::string> cells{name};
        for (const auto& r : results) cells.push_back(getter(r));
        g.push_back(cells);
    };
    auto money = [&](const std::string& name, auto value, auto applies) {
        row(name + "_usd", [&](const SizingResult& r) {
            return applies(r) ? fmt_double(value(r)) : std::string("-");
        });
        row(name + "_musd", [&](const SizingResult& r) {
            return applies(r) ? musd(value(r)) : std::string("-");
        });
    };
    auto always = [](const SizingResult&) { return true; };
    auto storage_only = [](const SizingResult& r) { return has_storage(r.kind); };
    auto nib_only = [](const SizingResult& r) { return r.kind == ModelKind::MGSNIB; };

    row("solution_status", [](const SizingResult& r) { return to_string(r.status); });
    // objective recomputed as the breakdown sum, not echoed from the solver
    money("objective", [](const SizingResult& r) { return r.cost.total(); }, always);
    money("dg_capital", [](const SizingResult& r) { return r.cost.dg_capital; }, always);
    money("pv_capital", [](const SizingResult& r) { return r.cost.pv_capital; }, always);
    money("bess_capital", [](const SizingResult& r) { return r.cost.bess_capital; }, storage_only);
    money("dg_op_noload", [](const SizingResult& r) { return r.cost.dg_op_noload; }, always);
    money("pv_deg", [](const SizingResult& r) { return r.cost.pv_deg; }, always);
    money("bess_deg", [](const SizingResult& r) { return r.cost.bess_deg; }, nib_only);
    return g;
}

Grid size_table(const std::vector<SizingResult>& results) {
    Grid g;
    std::vector<std::string> header{"attribute"};
    for (const auto& r : results) header.push_back(model_file_tag(r.kind));
    g.push_back(header);
    auto row = [&](const std::string& name, auto getter) {
        std::vector<std::string> cells{name};
        for (const auto& r : results) cells.push_back(getter(r));
        g.push_back(cells);
    };
    row("dg_size_mw", [](const SizingResult& r) { return fmt_double(r.dg_size); });
    row("pv_size_mw", [](const SizingResult& r) { return fmt_double(r.pv_size); });
    row("bess_size_mwh", [](const SizingResult& r) {
        return has_storage(r.kind) ? fmt_double(r.bess_size) : std::string("-");
    });
    return g;
}

Grid energy_table(const std::vector<SizingResult>& results, int planning_years) {
    Grid g;
    std::vector<std::string> header{"attribute"};
    for (const auto& r : results) header.push_back(model_file_tag(r.kind));
    g.push_back(header);

    auto pair_rows = [&](const std::string& name, auto value, auto applies) {
        std::vector<std::string> yr{name + "_mwh_yr"}, hz{name + "_mwh_horizon"};
        for (const auto& r : results) {
            if (applies(r)) {
                yr.push_back(fmt_double(value(r)));
                hz.push_back(fmt_double(value(r) * planning_years));
            } else {
                yr.push_back("-");
                hz.push_back("-");
            }
        }
        g.push_back(yr);
        g.push_back(hz);
    };
    auto always = [](const SizingResult&) { return true; };
    auto storage_only = [](const SizingResult& r) { return has_storage(r.kind); };

    pair_rows("total_load", [](const SizingResult& r) { return r.energy.total_load; }, always);
    pair_rows("dg_energy", [](const SizingResult& r) { return r.energy.dg_energy; }, always);
    pair_rows(
        "pv_energy_used", [](const SizingResult& r) { return r.energy.pv_energy_used; }, always);
    pair_rows("pv_curtailed", [](const SizingResult& r) { return r.energy.pv_curtailed; }, always);
    pair_rows("bess_charge", [](const SizingResult& r) { return r.energy.bess_charge; },
              storage_only);
    pair_rows("bess_discharge", [](const SizingResult& r) { return r.energy.bess_discharge; },
              storage_only);
    return g;
}

struct IpocRow {
    int index;
    double dod_used, deg_factor_used, avg_dod;
    double modeled, actual, correction, corrected;
    bool selected;
};

Grid ipoc_table(const std::vector<IpocRow>& rows) {
    Grid g;
    g.push_back({"iteration", "penalty_dod_pct", "deg_factor_usd_per_mwh", "avg_dod_pct",
                 "modeled_deg_cost_usd", "actual_deg_cost_usd", "cost_correction_usd",
                 "corrected_objective_usd", "actual_deg_cost_musd", "cost_correction_musd",
                 "corrected_objective_musd", "selected"});
    for (const auto& r : rows) {
        g.push_back({std::to_string(r.index), pct(r.dod_used), fmt_double(r.deg_factor_used),
                     pct(r.avg_dod), fmt_double(r.modeled), fmt_double(r.actual),
                     fmt_double(r.correction), fmt_double(r.corrected), musd(r.actual),
                     musd(r.correction), musd(r.corrected), r.selected ? "1" : "0"});
    }
    return g;
}

Grid dispatch_grid(const SizingResult& r, const Profiles& profiles) {
    const bool storage = has_storage(r.kind);
    Grid g;
    if (storage) {
        g.push_back({"day", "hour", "load_mw", "pv_unit", "p_dg_mw", "p_curt_mw", "p_chg_mw",
                     "p_dchg_mw", "u_dg", "u_chg", "u_dchg"});
    } else {
        g.push_back({"day", "hour", "load_mw", "pv_unit", "p_dg_mw", "p_curt_mw", "u_dg"});
    }
    const int D = static_cast<int>(r.dispatch.p_dg.size());
    const int T = D > 0 ? static_cast<int>(r.dispatch.p_dg[0].size()) : 0;
    for (int d = 0; d < D; ++d) {
        for (int t = 0; t < T; ++t) {
            std::vector<std::string> row{std::to_string(d + 1), std::to_string(t + 1),
                                         fmt_double(profiles.load[d][t]),
                                         fmt_double(profiles.pv_unit[d][t]),
                                         fmt_double(r.dispatch.p_dg[d][t]),
                                         fmt_double(r.dispatch.p_curt[d][t])};
            if (storage) {
                row.push_back(fmt_double(r.dispatch.p_chg[d][t]));
                row.push_back(fmt_double(r.dispatch.p_dchg[d][t]));
                row.push_back(fmt_double(r.dispatch.u_dg[d][t]));
                row.push_back(fmt_double(r.dispatch.u_chg[d][t]));
                row.push_back(fmt_double(r.dispatch.u_dchg[d][t]));
            } else {
                row.push_back(fmt_double(r.dispatch.u_dg[d][t]));
            }
            g.push_back(std::move(row));
        }
    }
    return g;
}

Grid soc_grid(const SizingResult& r) {
    Grid g;
    g.push_back({"day", "hour", "e_bess_mwh"});
    g.push_back({"0", "0", fmt_double(r.e_init)});
    for (size_t d = 0; d < r.soc.size(); ++d)
        for (size_t t = 0; t < r.soc[d].size(); ++t)
            g.push_back({std::to_string(d + 1), std::to_string(t + 1), fmt_double(r.soc[d][t])});
    return g;
}

json params_to_json(const ScenarioParams& p, const CycleLifeCurve& curve) {
    json j;
    j["dg_op_cost"] = p.dg_op_cost;
    j["dg_noload_cost"] = p.dg_noload_cost;
    j["dg_capital"] = p.dg_capital;
    j["pv_capital"] = p.pv_capital;
    j["pv_rep_frac"] = p.pv_rep_frac;
    j["pv_deg_rate"] = p.pv_deg_rate;
    j["bess_capital"] = p.bess_capital;
    j["bess_rep_frac"] = p.bess_rep_frac;
    j["t_chg"] = p.t_chg;
    j["t_dchg"] = p.t_dchg;
    j["eta"] = p.eta;
    j["soc_min"] = p.soc_min;
    j["soc_max"] = p.soc_max;
    j["dod_nominal"] = p.dod_nominal;
    j["dg_pmin"] = p.dg_pmin;
    j["planning_years"] = p.planning_years;
    j["big_m"] = p.big_m;
    j["strict_dg_min"] = p.strict_dg_min;
    j["u_dg_init"] = p.u_dg_init;
    json knots = json::array();
    for (const auto& [dod, cycles] : curve.knots) knots.push_back({dod, cycles});
    j["cycle_life"] = knots;
    return j;
}

ScenarioParams params_from_json(const json& j, CycleLifeCurve& curve) {
    ScenarioParams p;
    p.dg_op_cost = j.at("dg_op_cost");
    p.dg_noload_cost = j.at("dg_noload_cost");
    p.dg_capital = j.at("dg_capital");
    p.pv_capital = j.at("pv_capital");
    p.pv_rep_frac = j.at("pv_rep_frac");
    p.pv_deg_rate = j.at("pv_deg_rate");
    p.bess_capital = j.at("bess_capital");
    p.bess_rep_frac = j.at("bess_rep_frac");
    p.t_chg = j.at("t_chg");
    p.t_dchg = j.at("t_dchg");
    p.eta = j.at("eta");
    p.soc_min = j.at("soc_min");
    p.soc_max = j.at("soc_max");
    p.dod_nominal = j.at("dod_nominal");
    p.dg_pmin = j.at("dg_pmin");
    p.planning_years = j.at("planning_years");
    p.big_m = j.at("big_m");
    p.strict_dg_min = j.at("strict_dg_min");
    p.u_dg_init = j.at("u_dg_init");
    curve.knots.clear();
    for (const auto& k : j.at("cycle_life")) curve.knots.emplace_back(k[0], k[1]);
    return p;
}

std::string iter_stem(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "ipoc_iter%02d", index);
    return buf;
}

std::vector<IpocRow> ipoc_rows_from_report(const IpocReport& rep) {
    std::vector<IpocRow> rows;
    for (size_t i = 0; i < rep.iterations.size(); ++i) {
        const IpocIteration& it = rep.iterations[i];
        rows.push_back({it.index, it.dod_used, it.deg_factor_used, it.avg_dod_measured,
                        it.modeled_deg_cost, it.actual_deg_cost, it.correction,
                        it.corrected_objective, static_cast<int>(i) == rep.selected});
    }
    return rows;
}

}  // namespace

void RunConfig::validate() const {
    if (models.empty()) throw ValidationError("no models requested");
    if (run_ipoc) {
        bool has_nib = false;
        for (ModelKind k : models) has_nib = has_nib || k == ModelKind::MGSNIB;
        if (!has_nib)
            throw ValidationError("--ipoc requires the mgs-nib model (or --model all)");
    }
    if (load_path.empty() || pv_path.empty())
        throw ValidationError("load and pv profile paths are required");
    if (out_dir.empty()) throw ValidationError("output directory is required");
    if (big_m < 0.0) throw ValidationError("big_m must be >= 0");
}

void emit_tables(const ComparisonReport& report, const fs::path& dir) {
    fs::create_directories(dir);

    write_file(dir / "costs.csv", grid_to_csv(cost_table(report.results)));
    write_file(dir / "sizes.csv", grid_to_csv(size_table(report.results)));
    write_file(dir / "energy.csv",
               grid_to_csv(energy_table(report.results, report.params.planning_years)));

    for (const auto& r : report.results) {
        const std::string tag = model_file_tag(r.kind);
        write_file(dir / ("dispatch_" + tag + ".csv"), grid_to_csv(dispatch_grid(r, report.profiles)));
        if (has_storage(r.kind)) write_file(dir / ("soc_" + tag + ".csv"), grid_to_csv(soc_grid(r)));
    }

    if (report.ipoc) {
        write_file(dir / "ipoc.csv", grid_to_csv(ipoc_table(ipoc_rows_from_report(*report.ipoc))));
        for (const auto& it : report.ipoc->iterations) {
            write_file(dir / (iter_stem(it.index) + "_dispatch.csv"),
                       grid_to_csv(dispatch_grid(it.sizing, report.profiles)));
            write_file(dir / (iter_stem(it.index) + "_soc.csv"), grid_to_csv(soc_grid(it.sizing)));
        }
    }

    // machine-readable run metadata (solve wall times live here, not in the
    // deterministic CSV set)
    json meta;
    meta["alpha"] = report.alpha;
    meta["big_m"] = report.big_m;
    meta["resolution"] = to_string(report.resolution);
    meta["solver_backend"] = solver_backend_name();
    meta["params"] = params_to_json(report.params, report.curve);
    json models = json::array();
    for (const auto& r : report.results) {
        json m;
        m["kind"] = model_file_tag(r.kind);
        m["status"] = to_string(r.status);
        m["mip_gap"] = r.mip_gap;
        m["solve_seconds"] = r.solve_seconds;
        m["objective_usd"] = r.objective;
        m["dg_size_mw"] = r.dg_size;
        m["pv_size_mw"] = r.pv_size;
        m["bess_size_mwh"] = r.bess_size;
        m["e_init_mwh"] = r.e_init;
        m["deg_factor"] = r.deg_factor;
        models.push_back(m);
    }
    meta["models"] = models;
    json failures = json::array();
    for (const auto& f : report.failures)
        failures.push_back({{"kind", model_file_tag(f.kind)},
                            {"status", to_string(f.status)},
                            {"message", f.message}});
    meta["failures"] = failures;
    if (report.ipoc) {
        json ip;
        ip["termination"] = to_string(report.ipoc->termination);
        ip["selected"] = report.ipoc->selected;
        ip["error"] = report.ipoc->error;
        json iters = json::array();
        for (const auto& it : report.ipoc->iterations) {
            json ji;
            ji["index"] = it.index;
            ji["dod_used"] = it.dod_used;
            ji["deg_factor_used"] = it.deg_factor_used;
            ji["status"] = to_string(it.sizing.status);
            ji["objective_usd"] = it.sizing.objective;
            ji["dg_size_mw"] = it.sizing.dg_size;
            ji["pv_size_mw"] = it.sizing.pv_size;
            ji["bess_size_mwh"] = it.sizing.bess_size;
            ji["e_init_mwh"] = it.sizing.e_init;
            iters.push_back(ji);
        }
        ip["iterations"] = iters;
        meta["ipoc"] = ip;
    }
    write_file(dir / "run_meta.json", meta.dump(2) + "\n");

    // human-readable summary
    std::ostringstream s;
    s << "gridsizer run summary\n";
    s << "resolution: " << to_string(report.resolution) << " (alpha " << fmt_double(report.alpha)
      << ", " << report.profiles.num_days() << " days x " << report.profiles.hours_per_day()
      << " h)\n";
    s << "planning horizon: " << report.params.planning_years << " years\n";
    s << "solver backend: " << solver_backend_name() << "\n\n";
    auto round4 = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", v);
        return std::string(buf);
    };
    for (const auto& r : report.results) {
        s << model_name(r.kind) << ": status " << to_string(r.status) << ", objective $"
          << musd(r.cost.total()) << "M, DG " << round4(r.dg_size) << " MW, PV "
          << round4(r.pv_size) << " MW";
        if (has_storage(r.kind)) s << ", BESS " << round4(r.bess_size) << " MWh";
        if (r.mip_gap > 0) {
            char gap[32];
            std::snprintf(gap, sizeof(gap), "%.3g", r.mip_gap);
            s << ", gap " << gap;
        }
        s << ", solve " << round4(r.solve_seconds) << " s\n";
    }
    for (const auto& f : report.failures)
        s << model_name(f.kind) << ": " << to_string(f.status) << " (" << f.message << ")\n";
    if (report.ipoc) {
        s << "\nipoc: " << report.ipoc->iterations.size() << " iteration(s), termination "
          << to_string(report.ipoc->termination);
        if (report.ipoc->selected >= 0) {
            const auto& sel =
                report.ipoc->iterations[static_cast<size_t>(report.ipoc->selected)];
            s << ", selected iteration " << sel.index << " with corrected objective $"
              << musd(sel.corrected_objective) << "M";
        }
        s << "\n";
        if (!report.ipoc->error.empty()) s << "ipoc error: " << report.ipoc->error << "\n";
    }
    write_file(dir / "summary.txt", s.str());
}

std::pair<ComparisonReport, int> run_scenario(const RunConfig& config) {
    config.validate();

    ScenarioConfig scenario;
    if (!config.params_path.empty()) scenario = load_params(config.params_path);
    scenario.params.strict_dg_min = config.strict_dg_min;
    if (config.big_m > 0.0) scenario.params.big_m = config.big_m;

    Profiles raw = load_profiles(config.load_path, config.pv_path);
    Profiles profiles;
    const int want_days = resolution_days(config.resolution);
    if (raw.num_days() == want_days) {
        profiles = std::move(raw);
    } else if (raw.num_days() == 365) {
        profiles = resample(raw, config.resolution);
    } else {
        throw ValidationError("profiles have " + std::to_string(raw.num_days()) +
                              " days; resolution " + to_string(config.resolution) + " needs " +
                              std::to_string(want_days) + " (or 365 to resample)");
    }

    // pin the effective BigM so the metadata records the value actually used
    scenario.params.big_m = effective_big_m(scenario.params, profiles);

    ComparisonReport report;
    report.params = scenario.params;
    report.curve = scenario.curve;
    report.resolution = config.resolution;
    report.alpha = profiles.alpha;
    report.big_m = scenario.params.big_m;
    report.profiles = profiles;

    int exit_code = kExitOk;
    auto note_failure = [&](ModelKind kind, SolveStatus status, const std::string& msg, int code) {
        report.failures.push_back({kind, status, msg});
        if (exit_code == kExitOk) exit_code = code;
    };

    fs::create_directories(config.out_dir);
    for (ModelKind kind : config.models) {
        SizingModel sm;
        switch (kind) {
            case ModelKind::MGS: sm = build_mgs(scenario.params, profiles); break;
            case ModelKind::MGSIB: sm = build_mgs_ib(scenario.params, profiles); break;
            case ModelKind::MGSNIB:
                sm = build_mgs_nib(
                    scenario.params, profiles,
                    deg_factor(scenario.params, scenario.curve, scenario.params.dod_nominal));
                break;
        }
        write_file(config.out_dir / (model_file_tag(kind) + ".lp"), write_lp(sm.model));

        Solution sol = solve(sm.model, config.solve);
        switch (sol.status) {
            case SolveStatus::Optimal:
            case SolveStatus::FeasibleGapLimited:
                try {
                    report.results.push_back(decode(sm, sol, scenario.params, profiles));
                } catch (const IntegrityError& e) {
                    note_failure(kind, sol.status, e.what(), kExitIntegrity);
                }
                break;
            case SolveStatus::Infeasible:
                note_failure(kind, sol.status, "model is infeasible", kExitInfeasible);
                break;
            case SolveStatus::Unbounded:
                note_failure(kind, sol.status, "model is unbounded", kExitInfeasible);
                break;
            case SolveStatus::TimeLimit:
                note_failure(kind, sol.status, "time limit reached without an incumbent",
                             kExitNoIncumbent);
                break;
        }
    }

    // embedding property: with everything at proven optimality the storage
    // models can never cost more than the storage-free benchmark
    {
        const SizingResult* mgs = nullptr;
        const SizingResult* ib = nullptr;
        const SizingResult* nib = nullptr;
        for (const auto& r : report.results) {
            if (r.status != SolveStatus::Optimal) continue;
            if (r.kind == ModelKind::MGS) mgs = &r;
            if (r.kind == ModelKind::MGSIB) ib = &r;
            if (r.kind == ModelKind::MGSNIB) nib = &r;
        }
        const bool ib_bad = ib && nib && ib->objective > nib->objective * (1 + 1e-9);
        const bool nib_bad = nib && mgs && nib->objective > mgs->objective * (1 + 1e-9);
        const bool ib_mgs_bad = ib && mgs && ib->objective > mgs->objective * (1 + 1e-9);
        if (ib_bad || nib_bad || ib_mgs_bad)
            note_failure(ModelKind::MGSIB, SolveStatus::Optimal,
                         "objective ordering violated across models (builder/solver fault)",
                         kExitIntegrity);
    }

    if (config.run_ipoc) {
        IpocOptions iopts = config.ipoc;
        iopts.solve = config.solve;
        report.ipoc = run_ipoc(scenario.params, profiles, scenario.curve, iopts);
        if (report.ipoc->termination == IpocTermination::SolveFailed && exit_code == kExitOk)
            exit_code = kExitNoIncumbent;
    }

    emit_tables(report, config.out_dir);
    return {std::move(report), exit_code};
}

namespace {

struct ParsedTraces {
    Matrix load, pv_unit;
    Dispatch dispatch;
    Matrix soc;
    double e_init = 0.0;
};

int to_int(const std::string& s) { return std::stoi(s); }
double to_num(const std::string& s) { return std::stod(s); }

ParsedTraces parse_traces(const fs::path& dispatch_path, const fs::path& soc_path, bool storage) {
    ParsedTraces out;
    Grid g = parse_csv(read_file(dispatch_path));
    if (g.empty()) throw ValidationError(dispatch_path.string() + " is empty");
    const size_t want_cols = storage ? 11 : 7;
    if (g[0].size() != want_cols)
        throw ValidationError(dispatch_path.string() + ": unexpected column count");
    int max_day = 0, max_hour = 0;
    for (size_t i = 1; i < g.size(); ++i) {
        max_day = std::max(max_day, to_int(g[i][0]));
        max_hour = std::max(max_hour, to_int(g[i][1]));
    }
    auto blank = [&]() {
        return Matrix(static_cast<size_t>(max_day),
                      std::vector<double>(static_cast<size_t>(max_hour), 0.0));
    };
    out.load = blank();
    out.pv_unit = blank();
    out.dispatch.p_dg = blank();
    out.dispatch.p_curt = blank();
    out.dispatch.u_dg = blank();
    if (storage) {
        out.dispatch.p_chg = blank();
        out.dispatch.p_dchg = blank();
        out.dispatch.u_chg = blank();
        out.dispatch.u_dchg = blank();
    }
    for (size_t i = 1; i < g.size(); ++i) {
        const int d = to_int(g[i][0]) - 1, t = to_int(g[i][1]) - 1;
        out.load[d][t] = to_num(g[i][2]);
        out.pv_unit[d][t] = to_num(g[i][3]);
        out.dispatch.p_dg[d][t] = to_num(g[i][4]);
        out.dispatch.p_curt[d][t] = to_num(g[i][5]);
        if (storage) {
            out.dispatch.p_chg[d][t] = to_num(g[i][6]);
            out.dispatch.p_dchg[d][t] = to_num(g[i][7]);
            out.dispatch.u_dg[d][t] = to_num(g[i][8]);
            out.dispatch.u_chg[d][t] = to_num(g[i][9]);
            out.dispatch.u_dchg[d][t] = to_num(g[i][10]);
        } else {
            out.dispatch.u_dg[d][t] = to_num(g[i][6]);
        }
    }
    if (storage) {
        Grid sg = parse_csv(read_file(soc_path));
        if (sg.size() != static_cast<size_t>(max_day) * static_cast<size_t>(max_hour) + 2)
            throw ValidationError(soc_path.string() + ": unexpected row count");
        out.soc = blank();
        for (size_t i = 1; i < sg.size(); ++i) {
            const int d = to_int(sg[i][0]), t = to_int(sg[i][1]);
            if (d == 0) {
                out.e_init = to_num(sg[i][2]);
            } else {
                out.soc[d - 1][t - 1] = to_num(sg[i][2]);
            }
        }
    }
    return out;
}

// physical checks replayed directly from the traces
void check_traces(const ParsedTraces& tr, const SizingResult& r, const ScenarioParams& params,
                  std::vector<std::string>& issues, const std::string& label) {
    const bool storage = has_storage(r.kind);
    const int D = static_cast<int>(tr.load.size());
    const int T = D > 0 ? static_cast<int>(tr.load[0].size()) : 0;
    double worst_balance = 0.0, worst_recursion = 0.0, worst_anchor = 0.0;
    for (int d = 0; d < D; ++d) {
        for (int t = 0; t < T; ++t) {
            double lhs = tr.dispatch.p_dg[d][t] + tr.pv_unit[d][t] * r.pv_size -
                         tr.dispatch.p_curt[d][t];
            if (storage) lhs += tr.dispatch.p_dchg[d][t] - tr.dispatch.p_chg[d][t];
            worst_balance = std::max(worst_balance, std::fabs(lhs - tr.load[d][t]));
            if (storage) {
                const double prev = (t == 0) ? tr.e_init : tr.soc[d][t - 1];
                const double expect = prev + params.eta * tr.dispatch.p_chg[d][t] -
                                      tr.dispatch.p_dchg[d][t];
                worst_recursion = std::max(worst_recursion, std::fabs(tr.soc[d][t] - expect));
            }
        }
        if (storage && (D < 365 || d == D - 1))
            worst_anchor = std::max(worst_anchor, std::fabs(tr.soc[d][T - 1] - tr.e_init));
    }
    if (worst_balance > 1e-6)
        issues.push_back(label + ": power balance residual " + std::to_string(worst_balance));
    if (worst_recursion > 1e-6)
        issues.push_back(label + ": energy recursion residual " + std::to_string(worst_recursion));
    if (worst_anchor > 1e-6)
        issues.push_back(label + ": day-end anchoring residual " + std::to_string(worst_anchor));
}

bool numeric(const std::string& s, double& out) {
    if (s.empty() || s == "-") return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end && *end == '\0';
}

void diff_grids(const Grid& expected, const Grid& emitted, const std::string& label,
                std::vector<std::string>& issues) {
    if (expected.size() != emitted.size()) {
        issues.push_back(label + ": row count " + std::to_string(emitted.size()) + " != expected " +
                         std::to_string(expected.size()));
        return;
    }
    for (size_t i = 0; i < expected.size(); ++i) {
        if (expected[i].size() != emitted[i].size()) {
            issues.push_back(label + " row " + std::to_string(i) + ": column count mismatch");
            continue;
        }
        for (size_t j = 0; j < expected[i].size(); ++j) {
            double a = 0.0, b = 0.0;
            const bool na = numeric(expected[i][j], a), nb = numeric(emitted[i][j], b);
            bool ok;
            if (na && nb) {
                ok = std::fabs(a - b) <= 1e-6 * std::max({1.0, std::fabs(a), std::fabs(b)});
            } else {
                ok = expected[i][j] == emitted[i][j];
            }
            if (!ok)
                issues.push_back(label + " cell (" + std::to_string(i) + "," + std::to_string(j) +
                                 "): recomputed '" + expected[i][j] + "' vs emitted '" +
                                 emitted[i][j] + "'");
        }
    }
}

}  // namespace

std::vector<std::string> verify_outputs(const fs::path& dir) {
    std::vector<std::string> issues;
    json meta = json::parse(read_file(dir / "run_meta.json"));
    CycleLifeCurve curve;
    ScenarioParams params = params_from_json(meta.at("params"), curve);
    const double alpha = meta.at("alpha");

    std::vector<SizingResult> rebuilt;
    for (const auto& jm : meta.at("models")) {
        const ModelKind kind = model_kind_from_string(jm.at("kind").get<std::string>());
        const std::string tag = model_file_tag(kind);
        ParsedTraces tr = parse_traces(dir / ("dispatch_" + tag + ".csv"),
                                       dir / ("soc_" + tag + ".csv"), has_storage(kind));
        SizingResult r;
        r.kind = kind;
        r.alpha = alpha;
        r.deg_factor = jm.at("deg_factor");
        r.dg_size = jm.at("dg_size_mw");
        r.pv_size = jm.at("pv_size_mw");
        r.bess_size = jm.at("bess_size_mwh");
        r.e_init = tr.e_init;
        r.dispatch = tr.dispatch;
        r.soc = tr.soc;
        r.status = SolveStatus::Optimal;  // placeholder; status row compared from meta below
        const std::string status_str = jm.at("status");
        for (SolveStatus s : {SolveStatus::Optimal, SolveStatus::FeasibleGapLimited,
                              SolveStatus::Infeasible, SolveStatus::Unbounded,
                              SolveStatus::TimeLimit})
            if (to_string(s) == status_str) r.status = s;
        try {
            recompute_derived(r, params, tr.load, tr.pv_unit);
        } catch (const std::exception& e) {
            issues.push_back(tag + ": " + e.what());
            continue;
        }
        check_traces(tr, r, params, issues, tag);
        rebuilt.push_back(std::move(r));
    }

    diff_grids(cost_table(rebuilt), parse_csv(read_file(dir / "costs.csv")), "costs.csv", issues);
    diff_grids(size_table(rebuilt), parse_csv(read_file(dir / "sizes.csv")), "sizes.csv", issues);
    diff_grids(energy_table(rebuilt, params.planning_years),
               parse_csv(read_file(dir / "energy.csv")), "energy.csv", issues);

    if (meta.contains("ipoc")) {
        const json& jip = meta.at("ipoc");
        std::vector<IpocRow> rows;
        const int selected = jip.at("selected");
        for (const auto& ji : jip.at("iterations")) {
            const int index = ji.at("index");
            ParsedTraces tr = parse_traces(dir / (iter_stem(index) + "_dispatch.csv"),
                                           dir / (iter_stem(index) + "_soc.csv"), true);
            SizingResult r;
            r.kind = ModelKind::MGSNIB;
            r.alpha = alpha;
            r.deg_factor = ji.at("deg_factor_used");
            r.dg_size = ji.at("dg_size_mw");
            r.pv_size = ji.at("pv_size_mw");
            r.bess_size = ji.at("bess_size_mwh");
            r.e_init = tr.e_init;
            r.dispatch = tr.dispatch;
            r.soc = tr.soc;
            try {
                recompute_derived(r, params, tr.load, tr.pv_unit);
            } catch (const std::exception& e) {
                issues.push_back(iter_stem(index) + std::string(": ") + e.what());
                continue;
            }
            check_traces(tr, r, params, issues, iter_stem(index));
            r.objective = r.cost.total();
            const IpocEvaluation ev = evaluate_iteration(r, params, curve);
            rows.push_back({index, ji.at("dod_used").get<double>(), r.deg_factor, ev.avg_dod,
                            ev.modeled_deg_cost, ev.actual_deg_cost, ev.correction,
                            ev.corrected_objective,
                            selected >= 0 &&
                                static_cast<size_t>(selected) + 1 == static_cast<size_t>(index)});
        }
        diff_grids(ipoc_table(rows), parse_csv(read_file(dir / "ipoc.csv")), "ipoc.csv", issues);
    }
    return issues;
}

}  // namespace gridsizer
