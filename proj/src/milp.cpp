#include "gridsizer/milp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

namespace gridsizer {

void LinearExpr::add(double coef, VarRef var) {
    if (!var.valid()) throw std::invalid_argument("LinearExpr: unregistered variable handle");
    terms_.push_back({coef, var});
}

LinearExpr& LinearExpr::operator+=(const LinearExpr& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    constant_ += other.constant_;
    return *this;
}

void LinearExpr::normalize() {
    if (!std::isfinite(constant_))
        throw std::invalid_argument("LinearExpr: non-finite constant");
    std::unordered_map<int, double> acc;
    std::vector<int> order;
    order.reserve(terms_.size());
    for (const Term& t : terms_) {
        if (!std::isfinite(t.coef))
            throw std::invalid_argument("LinearExpr: non-finite coefficient");
        auto [it, fresh] = acc.try_emplace(t.var.id, 0.0);
        if (fresh) order.push_back(t.var.id);
        it->second += t.coef;
    }
    terms_.clear();
    for (int id : order) {
        double c = acc[id];
        if (c != 0.0) terms_.push_back({c, VarRef{id}});
    }
}

double LinearExpr::evaluate(const std::vector<double>& values) const {
    double s = constant_;
    for (const Term& t : terms_) s += t.coef * values.at(static_cast<size_t>(t.var.id));
    return s;
}

VarRef MILPModel::add_var(const std::string& name, double lower, double upper) {
    if (lower > upper) throw std::invalid_argument("variable '" + name + "': lower > upper");
    VarRef ref{static_cast<int>(vars_.size())};
    vars_.push_back({name, VarKind::Continuous, lower, upper});
    return ref;
}

VarRef MILPModel::add_binary(const std::string& name) {
    VarRef ref{static_cast<int>(vars_.size())};
    vars_.push_back({name, VarKind::Binary, 0.0, 1.0});
    return ref;
}

void MILPModel::add_constraint(const std::string& name, LinearExpr expr, Sense sense, double rhs) {
    expr.normalize();
    check_expr_registered(expr, "constraint '" + name + "'");
    constraints_.push_back({name, std::move(expr), sense, rhs});
}

void MILPModel::set_objective(LinearExpr expr) {
    expr.normalize();
    check_expr_registered(expr, "objective");
    objective_ = std::move(expr);
}

const VarInfo& MILPModel::var(VarRef ref) const {
    if (!ref.valid() || ref.id >= num_vars())
        throw std::invalid_argument("variable handle out of range");
    return vars_[static_cast<size_t>(ref.id)];
}

int MILPModel::num_binaries() const {
    int n = 0;
    for (const VarInfo& v : vars_)
        if (v.kind == VarKind::Binary) ++n;
    return n;
}

void MILPModel::check_expr_registered(const LinearExpr& expr, const std::string& where) const {
    for (const Term& t : expr.terms()) {
        if (!t.var.valid() || t.var.id >= num_vars())
            throw std::invalid_argument(where + ": references an unregistered variable");
    }
}

void MILPModel::check() const {
    std::unordered_set<std::string> names;
    for (const VarInfo& v : vars_) {
        if (!names.insert(v.name).second)
            throw std::invalid_argument("duplicate variable name '" + v.name + "'");
        if (v.kind == VarKind::Binary && (v.lower < 0.0 || v.upper > 1.0))
            throw std::invalid_argument("binary variable '" + v.name + "' has bounds outside [0,1]");
    }
    names.clear();
    for (const Constraint& c : constraints_) {
        if (!names.insert(c.name).second)
            throw std::invalid_argument("duplicate constraint name '" + c.name + "'");
        check_expr_registered(c.expr, "constraint '" + c.name + "'");
    }
    check_expr_registered(objective_, "objective");
}

double Solution::value(VarRef ref) const {
    if (!has_values()) throw std::logic_error("solution carries no variable values");
    return values.at(static_cast<size_t>(ref.id));
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::FeasibleGapLimited: return "FeasibleGapLimited";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::Unbounded: return "Unbounded";
        case SolveStatus::TimeLimit: return "TimeLimit";
    }
    return "Unknown";
}

std::string fmt_double(double v) {
    if (v == 0.0) return "0";  // normalize -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

// Appends "coef name" in LP syntax; `first` suppresses the leading sign of
// positive coefficients.
void append_term(std::string& line, double coef, const std::string& name, bool first) {
    if (first) {
        if (coef == -1.0) {
            line += "- " + name;
        } else if (coef == 1.0) {
            line += name;
        } else {
            line += fmt_double(coef) + " " + name;
        }
        return;
    }
    if (coef < 0.0) {
        line += (coef == -1.0) ? " - " + name : " - " + fmt_double(-coef) + " " + name;
    } else {
        line += (coef == 1.0) ? " + " + name : " + " + fmt_double(coef) + " " + name;
    }
}

}  // namespace

std::string write_lp(const MILPModel& model) {
    model.check();
    std::string out;
    out.reserve(4096 + model.constraints().size() * 64);

    auto emit_expr = [&](const std::string& label, const LinearExpr& expr,
                         const std::string& tail, bool with_constant) {
        std::string line = " " + label + " ";
        bool first = true;
        for (const Term& t : expr.terms()) {
            if (line.size() > 200) {  // wrap long rows for parser friendliness
                out += line + "\n";
                line = "   ";
            }
            append_term(line, t.coef, model.var(t.var).name, first);
            first = false;
        }
        if (with_constant && expr.constant() != 0.0) {
            if (first) {
                line += fmt_double(expr.constant());
            } else {
                double c = expr.constant();
                line += (c < 0.0) ? " - " + fmt_double(-c) : " + " + fmt_double(c);
            }
            first = false;
        }
        if (first) line += "0";
        line += tail;
        out += line + "\n";
    };

    out += "\\ LP export\n";
    out += "Minimize\n";
    emit_expr("obj:", model.objective(), "", /*with_constant=*/true);

    out += "Subject To\n";
    int auto_idx = 0;
    for (const Constraint& c : model.constraints()) {
        std::string name = c.name.empty() ? "c" + std::to_string(auto_idx) : c.name;
        ++auto_idx;
        const char* op = c.sense == Sense::LessEqual ? " <= "
                        : c.sense == Sense::Equal   ? " = "
                                                    : " >= ";
        // Constraint constants fold into the right-hand side.
        emit_expr(name + ":", c.expr, op + fmt_double(c.rhs - c.expr.constant()),
                  /*with_constant=*/false);
    }

    std::string bounds;
    std::string binaries;
    for (int i = 0; i < model.num_vars(); ++i) {
        const VarInfo& v = model.vars()[static_cast<size_t>(i)];
        if (v.kind == VarKind::Binary) {
            binaries += " " + v.name + "\n";
            continue;
        }
        if (v.lower == 0.0 && v.upper == kInf) continue;  // LP default
        if (v.lower == -kInf && v.upper == kInf) {
            bounds += " " + v.name + " free\n";
        } else if (v.lower == v.upper) {
            bounds += " " + v.name + " = " + fmt_double(v.lower) + "\n";
        } else if (v.lower == 0.0) {
            bounds += " " + v.name + " <= " + fmt_double(v.upper) + "\n";
        } else if (v.upper == kInf) {
            bounds += " " + v.name + " >= " + fmt_double(v.lower) + "\n";
        } else {
            bounds += " " + fmt_double(v.lower) + " <= " + v.name + " <= " + fmt_double(v.upper) +
                      "\n";
        }
    }
    if (!bounds.empty()) out += "Bounds\n" + bounds;
    if (!binaries.empty()) out += "Binary\n" + binaries;
    out += "End\n";
    return out;
}

double max_violation(const MILPModel& model, const std::vector<double>& x) {
    if (x.size() != static_cast<size_t>(model.num_vars()))
        throw std::invalid_argument("max_violation: value vector size mismatch");
    double worst = 0.0;
    for (int i = 0; i < model.num_vars(); ++i) {
        const VarInfo& v = model.vars()[static_cast<size_t>(i)];
        double val = x[static_cast<size_t>(i)];
        worst = std::max(worst, v.lower - val);
        worst = std::max(worst, val - v.upper);
        if (v.kind == VarKind::Binary) worst = std::max(worst, std::fabs(val - std::round(val)));
    }
    for (const Constraint& c : model.constraints()) {
        double lhs = c.expr.evaluate(x);
        switch (c.sense) {
            case Sense::LessEqual: worst = std::max(worst, lhs - c.rhs); break;
            case Sense::GreaterEqual: worst = std::max(worst, c.rhs - lhs); break;
            case Sense::Equal: worst = std::max(worst, std::fabs(lhs - c.rhs)); break;
        }
    }
    return std::max(worst, 0.0);
}

}  // namespace gridsizer
