#include <CLI11.hpp>
#include <iostream>

#include "gridsizer/report.hpp"

using namespace gridsizer;

int main(int argc, char** argv) {
    CLI::App app{"gridsizer - microgrid DG/PV/BESS sizing with degradation-aware correction"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "build, solve and report the sizing models");
    std::string model_arg = "all";
    std::string resolution_arg = "365day";
    RunConfig config;
    std::string out_arg;
    run_cmd->add_option("--model", model_arg, "mgs | mgs-ib | mgs-nib | all")
        ->check(CLI::IsMember({"mgs", "mgs-ib", "mgs-nib", "all"}));
    run_cmd->add_option("--resolution", resolution_arg, "365day | 12day | 1day")
        ->check(CLI::IsMember({"365day", "12day", "1day"}));
    run_cmd->add_option("--load", config.load_path, "load profile CSV (day,hour,value in MW)")
        ->required();
    run_cmd->add_option("--pv", config.pv_path, "per-MW PV production CSV (day,hour,value)")
        ->required();
    run_cmd->add_option("--params", config.params_path, "parameter file (key = value)");
    run_cmd->add_option("--out", out_arg, "output directory")->required();
    run_cmd->add_flag("--ipoc", config.run_ipoc,
                      "run the iterative degradation-cost correction (mgs-nib)");
    run_cmd->add_option("--mip-gap", config.solve.mip_gap, "relative MIP gap (default 0)");
    run_cmd->add_option("--time-limit", config.solve.time_limit,
                        "solve time limit in seconds (default 43200)");
    run_cmd->add_flag("--strict-paper-eq4", config.strict_dg_min,
                      "enforce the literal always-on DG minimum-output constraint");
    run_cmd->add_option("--big-m", config.big_m, "BigM constant in MW (default: 10x peak load)");
    run_cmd->add_option("--ipoc-max-iter", config.ipoc.max_iter, "IPOC iteration cap (default 10)");
    run_cmd->add_option("--ipoc-obj-tol", config.ipoc.obj_tol,
                        "IPOC relative objective tolerance (default 1e-4)");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "recompute report tables from traces");
    std::string verify_dir;
    verify_cmd->add_option("--out", verify_dir, "directory produced by 'run'")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            if (model_arg == "all") {
                config.models = {ModelKind::MGS, ModelKind::MGSIB, ModelKind::MGSNIB};
            } else {
                config.models = {model_kind_from_string(model_arg)};
            }
            config.resolution = resolution_from_string(resolution_arg);
            config.out_dir = out_arg;
            auto [report, code] = run_scenario(config);
            std::cout << "wrote " << config.out_dir.string() << " (" << report.results.size()
                      << " model(s) solved";
            if (!report.failures.empty()) std::cout << ", " << report.failures.size() << " failed";
            std::cout << ")\n";
            for (const auto& f : report.failures)
                std::cerr << "error: " << model_name(f.kind) << ": " << f.message << "\n";
            return code;
        }
        if (verify_cmd->parsed()) {
            const auto issues = verify_outputs(verify_dir);
            if (issues.empty()) {
                std::cout << "verify: all tables reproduce from traces\n";
                return kExitOk;
            }
            for (const auto& issue : issues) std::cerr << "verify: " << issue << "\n";
            return kExitVerifyFailed;
        }
    } catch (const SolverConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IntegrityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIntegrity;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitUsage;
}
