#include "gridsizer/solver.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace gridsizer {

namespace {

// HiGHS via scipy.optimize.milp. The request carries dense objective/bounds
// and the constraint matrix as COO triplets; row senses are encoded as
// [lb, ub] pairs. Infinities travel as JSON null.
//
// Time-limited MIP runs can end with a poor (or no) incumbent while the dual
// bound is already tight; the bridge then derives its own incumbent by LP
// rounding: solve the relaxation, fix binaries (repairing rows whose support
// is all-binary), and re-solve the continuous LP. The better incumbent wins
// and the reported gap is measured against the solver's dual bound.
const char kHighsBridge[] = R"PY(
import json, sys, time
import numpy as np
from scipy import sparse
from scipy.optimize import milp, LinearConstraint, Bounds

def _inf(values, sign):
    return np.asarray([sign * np.inf if v is None else float(v) for v in values], dtype=float)

req = json.load(open(sys.argv[1]))
n = int(req["num_vars"])
c = np.asarray(req["obj"], dtype=float)
lb = _inf(req["lb"], -1.0)
ub = _inf(req["ub"], 1.0)
integrality = np.asarray(req["integrality"], dtype=np.uint8)
rows = req["rows"]

mat = None
rlb = np.zeros(0)
rub = np.zeros(0)
if rows["count"] > 0:
    mat = sparse.csr_matrix(
        (np.asarray(rows["vals"], dtype=float),
         (np.asarray(rows["ri"], dtype=np.int64), np.asarray(rows["ci"], dtype=np.int64))),
        shape=(rows["count"], n))
    rlb = _inf(rows["lb"], -1.0)
    rub = _inf(rows["ub"], 1.0)

opts = req.get("options", {})
time_limit = float(opts.get("time_limit") or 1e30)
mip_gap = float(opts.get("mip_gap") or 0.0)

def run_milp(integ, low, high, budget):
    options = {"presolve": True, "disp": False, "time_limit": budget,
               "mip_rel_gap": mip_gap}
    cons = LinearConstraint(mat, rlb, rub) if mat is not None else ()
    return milp(c=c, constraints=cons, integrality=integ, bounds=Bounds(low, high),
                options=options)

t0 = time.perf_counter()
res = run_milp(integrality, lb, ub, time_limit)
is_mip = int(integrality.sum()) > 0
dual_bound = getattr(res, "mip_dual_bound", None)

best_x = None
best_obj = None
if res.x is not None:
    best_x = np.asarray(res.x, dtype=float)
    best_obj = float(res.fun)

# LP-rounding incumbent for time-limited MIP runs
if is_mip and res.status == 1:
    relax = run_milp(np.zeros(n, dtype=np.uint8), lb, ub, max(30.0, time_limit * 0.1))
    if relax.x is not None:
        frac = np.asarray(relax.x, dtype=float)
        bins = np.flatnonzero(integrality > 0)
        binset = set(int(b) for b in bins)
        for threshold in (1e-7, 0.5):
            fixed = frac.copy()
            fixed[bins] = (frac[bins] > threshold).astype(float)
            if mat is not None:
                # repair rows whose support is entirely binary
                csr = mat
                for i in range(csr.shape[0]):
                    sl = slice(csr.indptr[i], csr.indptr[i + 1])
                    cols = csr.indices[sl]
                    if len(cols) == 0 or not all(int(j) in binset for j in cols):
                        continue
                    vals = csr.data[sl]
                    for _ in range(len(cols)):
                        act = float(np.dot(vals, fixed[cols]))
                        if act > rub[i] + 1e-9:
                            cand = [j for j, v in zip(cols, vals) if v > 0 and fixed[j] == 1.0]
                            if not cand:
                                break
                            flip = min(cand, key=lambda j: (frac[j], j))
                            fixed[flip] = 0.0
                        elif act < rlb[i] - 1e-9:
                            cand = [j for j, v in zip(cols, vals) if v > 0 and fixed[j] == 0.0]
                            if not cand:
                                break
                            flip = max(cand, key=lambda j: (frac[j], -j))
                            fixed[flip] = 1.0
                        else:
                            break
            flow = lb.copy()
            fhigh = ub.copy()
            flow[bins] = fixed[bins]
            fhigh[bins] = fixed[bins]
            sub = run_milp(np.zeros(n, dtype=np.uint8), flow, fhigh, max(30.0, time_limit * 0.1))
            if sub.x is not None and (best_obj is None or float(sub.fun) < best_obj):
                best_x = np.asarray(sub.x, dtype=float)
                best_obj = float(sub.fun)

elapsed = time.perf_counter() - t0

out = {"scipy_status": int(res.status), "message": str(res.message),
       "solve_seconds": elapsed, "obj_const": float(req.get("obj_const", 0.0))}
if best_x is not None:
    out["x"] = [float(v) for v in best_x]
    out["objective"] = float(best_obj)
    if res.status == 0:
        gap = getattr(res, "mip_gap", None)
        out["mip_gap"] = float(gap) if gap is not None else 0.0
    elif dual_bound is not None and np.isfinite(dual_bound):
        out["mip_gap"] = max(0.0, (best_obj - float(dual_bound)) /
                             max(1e-10, abs(best_obj)))
    else:
        out["mip_gap"] = 1.0
json.dump(out, open(sys.argv[2], "w"))
)PY";

std::string python_executable() {
    const char* env = std::getenv("GRIDSIZER_PYTHON");
    return env && *env ? env : "python3";
}

// Writes the bridge script once per process.
const fs::path& bridge_script_path() {
    static const fs::path path = [] {
        fs::path dir = fs::temp_directory_path();
        fs::path p = dir / ("gridsizer_highs_bridge_" + std::to_string(::getpid()) + ".py");
        std::ofstream out(p);
        out << kHighsBridge;
        if (!out) throw SolverConfigError("cannot write solver bridge script to " + p.string());
        return p;
    }();
    return path;
}

json model_to_request(const MILPModel& model, const SolveOptions& opts) {
    const int n = model.num_vars();
    std::vector<double> obj(static_cast<size_t>(n), 0.0);
    for (const Term& t : model.objective().terms())
        obj[static_cast<size_t>(t.var.id)] = t.coef;

    json lb = json::array(), ub = json::array(), integrality = json::array();
    for (const VarInfo& v : model.vars()) {
        lb.push_back(v.lower == -kInf ? json() : json(v.lower));
        ub.push_back(v.upper == kInf ? json() : json(v.upper));
        integrality.push_back(v.kind == VarKind::Binary ? 1 : 0);
    }

    json ri = json::array(), ci = json::array(), vals = json::array();
    json rlb = json::array(), rub = json::array();
    int row = 0;
    for (const Constraint& c : model.constraints()) {
        for (const Term& t : c.expr.terms()) {
            ri.push_back(row);
            ci.push_back(t.var.id);
            vals.push_back(t.coef);
        }
        double rhs = c.rhs - c.expr.constant();
        switch (c.sense) {
            case Sense::LessEqual:
                rlb.push_back(json());
                rub.push_back(rhs);
                break;
            case Sense::GreaterEqual:
                rlb.push_back(rhs);
                rub.push_back(json());
                break;
            case Sense::Equal:
                rlb.push_back(rhs);
                rub.push_back(rhs);
                break;
        }
        ++row;
    }

    json req;
    req["num_vars"] = n;
    req["obj"] = std::move(obj);
    req["obj_const"] = model.objective().constant();
    req["lb"] = std::move(lb);
    req["ub"] = std::move(ub);
    req["integrality"] = std::move(integrality);
    req["rows"] = {{"count", row}, {"ri", std::move(ri)}, {"ci", std::move(ci)},
                   {"vals", std::move(vals)}, {"lb", std::move(rlb)}, {"ub", std::move(rub)}};
    req["options"] = {{"mip_gap", opts.mip_gap}, {"time_limit", opts.time_limit}};
    return req;
}

Solution solve_with_highs_bridge(const MILPModel& model, const SolveOptions& opts) {
    static std::atomic<int> run_counter{0};
    const fs::path tmp = fs::temp_directory_path();
    const std::string stem =
        "gridsizer_" + std::to_string(::getpid()) + "_" + std::to_string(run_counter++);
    const fs::path req_path = tmp / (stem + "_req.json");
    const fs::path resp_path = tmp / (stem + "_resp.json");
    const fs::path log_path = tmp / (stem + "_err.log");

    {
        std::ofstream req_out(req_path);
        req_out << model_to_request(model, opts);
        if (!req_out) throw SolverError("cannot write solver request to " + req_path.string());
    }

    std::string cmd = python_executable() + " " + bridge_script_path().string() + " " +
                      req_path.string() + " " + resp_path.string() + " 2> " + log_path.string();
    auto t0 = std::chrono::steady_clock::now();
    int rc = std::system(cmd.c_str());
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    auto cleanup = [&] {
        std::error_code ec;
        fs::remove(req_path, ec);
        fs::remove(resp_path, ec);
        fs::remove(log_path, ec);
    };

    if (rc != 0 || !fs::exists(resp_path)) {
        std::string detail;
        if (std::ifstream log(log_path); log) {
            std::ostringstream buf;
            buf << log.rdbuf();
            detail = buf.str();
            if (detail.size() > 800) detail = detail.substr(0, 800) + "...";
        }
        cleanup();
        throw SolverConfigError("solver backend 'highs' failed to run (python3+scipy required): " +
                                detail);
    }

    json resp;
    {
        std::ifstream in(resp_path);
        in >> resp;
    }
    cleanup();

    Solution sol;
    sol.solve_seconds = resp.value("solve_seconds", wall);
    const int scipy_status = resp.at("scipy_status").get<int>();
    const bool has_x = resp.contains("x");

    if (has_x) {
        sol.values = resp.at("x").get<std::vector<double>>();
        if (sol.values.size() != static_cast<size_t>(model.num_vars()))
            throw SolverError("solver returned a value vector of the wrong length");
        // Scrub numerical dust so downstream residual checks see clean values.
        for (int i = 0; i < model.num_vars(); ++i) {
            double& v = sol.values[static_cast<size_t>(i)];
            if (std::fabs(v) < 1e-11) v = 0.0;
            if (model.vars()[static_cast<size_t>(i)].kind == VarKind::Binary) {
                if (std::fabs(v - 1.0) < 1e-9) v = 1.0;
                if (std::fabs(v) < 1e-9) v = 0.0;
            }
        }
        sol.objective_value = model.objective().evaluate(sol.values);
        sol.mip_gap = resp.value("mip_gap", 0.0);
    }

    switch (scipy_status) {
        case 0:  // solver-reported success
            sol.status = (sol.mip_gap <= 1e-12) ? SolveStatus::Optimal
                                                : SolveStatus::FeasibleGapLimited;
            break;
        case 1:  // iteration or time limit
            if (has_x) {
                sol.status = SolveStatus::FeasibleGapLimited;
            } else {
                sol.status = SolveStatus::TimeLimit;
            }
            break;
        case 2:
            sol.status = SolveStatus::Infeasible;
            sol.values.clear();
            break;
        case 3:
            sol.status = SolveStatus::Unbounded;
            sol.values.clear();
            break;
        default:
            throw SolverError("solver reported failure: " + resp.value("message", "unknown"));
    }
    return sol;
}

}  // namespace

std::string solver_backend_name() {
    const char* env = std::getenv("GRIDSIZER_SOLVER");
    return env && *env ? env : "highs";
}

Solution solve(const MILPModel& model, const SolveOptions& opts) {
    model.check();
    if (opts.mip_gap < 0.0) throw std::invalid_argument("mip_gap must be >= 0");
    if (opts.time_limit <= 0.0) throw std::invalid_argument("time_limit must be > 0");
    const std::string backend = solver_backend_name();
    if (backend == "highs") return solve_with_highs_bridge(model, opts);
    throw SolverConfigError("unknown solver backend '" + backend +
                            "' (set GRIDSIZER_SOLVER=highs)");
}

}  // namespace gridsizer
