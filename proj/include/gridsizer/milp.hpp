#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridsizer {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };

// Opaque handle into a MILPModel's variable table.
struct VarRef {
    int id = -1;
    bool valid() const { return id >= 0; }
};

struct VarInfo {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lower = 0.0;
    double upper = kInf;
};

struct Term {
    double coef = 0.0;
    VarRef var;
};

// Sparse linear expression: sum(coef_i * var_i) + constant.
class LinearExpr {
public:
    LinearExpr() = default;
    LinearExpr(double constant) : constant_(constant) {}

    void add(double coef, VarRef var);
    void add_constant(double c) { constant_ += c; }

    LinearExpr& operator+=(const LinearExpr& other);

    // Merges duplicate variables and drops zero coefficients.
    // Throws std::invalid_argument on non-finite coefficients.
    void normalize();

    const std::vector<Term>& terms() const { return terms_; }
    double constant() const { return constant_; }

    double evaluate(const std::vector<double>& values) const;

private:
    std::vector<Term> terms_;
    double constant_ = 0.0;
};

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Constraint {
    std::string name;
    LinearExpr expr;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

// Solver-agnostic minimization MILP. Variables and constraints keep
// registration order; serialization and solves are deterministic.
class MILPModel {
public:
    VarRef add_var(const std::string& name, double lower = 0.0, double upper = kInf);
    VarRef add_binary(const std::string& name);

    void add_constraint(const std::string& name, LinearExpr expr, Sense sense, double rhs);
    void set_objective(LinearExpr expr);

    const std::vector<VarInfo>& vars() const { return vars_; }
    const VarInfo& var(VarRef ref) const;
    const std::vector<Constraint>& constraints() const { return constraints_; }
    const LinearExpr& objective() const { return objective_; }

    int num_vars() const { return static_cast<int>(vars_.size()); }
    int num_binaries() const;

    // Checks registration of every referenced variable and name uniqueness.
    // Throws std::invalid_argument naming the offending constraint.
    void check() const;

private:
    void check_expr_registered(const LinearExpr& expr, const std::string& where) const;

    std::vector<VarInfo> vars_;
    std::vector<Constraint> constraints_;
    LinearExpr objective_;
};

enum class SolveStatus { Optimal, FeasibleGapLimited, Infeasible, Unbounded, TimeLimit };

std::string to_string(SolveStatus s);

struct Solution {
    SolveStatus status = SolveStatus::Infeasible;
    double objective_value = 0.0;
    std::vector<double> values;  // indexed by VarRef::id; empty if no incumbent
    double mip_gap = 0.0;
    double solve_seconds = 0.0;

    bool has_values() const { return !values.empty(); }
    double value(VarRef ref) const;
};

// CPLEX-style LP text (Minimize / Subject To / Bounds / Binary / End).
// Output is deterministic: registration order, shortest round-trip doubles.
std::string write_lp(const MILPModel& model);

// Largest violation of any constraint, variable bound, or binary
// integrality when the model is evaluated at x. Zero for a feasible point.
double max_violation(const MILPModel& model, const std::vector<double>& x);

// Shortest round-trip decimal formatting (shared by LP writer and CSV emitters).
std::string fmt_double(double v);

}  // namespace gridsizer
