#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gridsizer/ipoc.hpp"
#include "gridsizer/scenario.hpp"
#include "gridsizer/sizing.hpp"
#include "gridsizer/solver.hpp"

namespace gridsizer {

struct RunConfig {
    std::vector<ModelKind> models;  // Table-order subset of {MGS, MGS-IB, MGS-NIB}
    ResolutionMode resolution = ResolutionMode::Full365;
    std::string load_path;
    std::string pv_path;
    std::string params_path;  // empty = bundled defaults
    std::filesystem::path out_dir;
    SolveOptions solve;
    bool run_ipoc = false;
    IpocOptions ipoc;
    bool strict_dg_min = false;
    double big_m = 0.0;  // 0 = derive

    void validate() const;  // e.g. ipoc only with MGS-NIB in the set
};

struct ModelFailure {
    ModelKind kind;
    SolveStatus status;
    std::string message;
};

struct ComparisonReport {
    ScenarioParams params;
    CycleLifeCurve curve;
    ResolutionMode resolution = ResolutionMode::Full365;
    double alpha = 1.0;
    double big_m = 0.0;
    Profiles profiles;
    std::vector<SizingResult> results;  // successfully solved models, Table order
    std::vector<ModelFailure> failures;
    std::optional<IpocReport> ipoc;
};

// Exit codes for the CLI (distinct per error class).
enum ExitCode {
    kExitOk = 0,
    kExitUsage = 1,
    kExitConfig = 2,      // bad inputs / IO
    kExitInfeasible = 3,
    kExitNoIncumbent = 4, // time limit without a feasible point
    kExitIntegrity = 5,   // solution failed residual checks
    kExitVerifyFailed = 6
};

// Loads inputs, builds and solves the requested models, runs IPOC when asked
// and writes all outputs under config.out_dir. Returns the report plus the
// process exit code.
std::pair<ComparisonReport, int> run_scenario(const RunConfig& config);

// Writes costs.csv / sizes.csv / energy.csv / ipoc.csv, per-model LP files,
// dispatch and SOC traces, run_meta.json and summary.txt. Deterministic:
// identical reports produce byte-identical files.
void emit_tables(const ComparisonReport& report, const std::filesystem::path& dir);

// Recomputes every table cell from the emitted traces + run_meta.json and
// diffs against the emitted tables (1e-6 relative). Returns mismatch
// descriptions; empty = verified.
std::vector<std::string> verify_outputs(const std::filesystem::path& dir);

}  // namespace gridsizer
