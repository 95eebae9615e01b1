// Test-only LP-format reader: parses the writer's output back into a
// MILPModel so serialized models can be re-solved and compared. Written
// against the LP grammar, not against the writer's code.
#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridsizer/milp.hpp"

namespace testsupport {

inline gridsizer::MILPModel parse_lp(const std::string& text) {
    using namespace gridsizer;

    // tokenize, dropping comment lines
    std::vector<std::string> tokens;
    {
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            if (!line.empty() && line[0] == '\\') continue;
            std::istringstream ls(line);
            std::string tok;
            while (ls >> tok) {
                // split a trailing ':' off names
                if (tok.size() > 1 && tok.back() == ':') {
                    tokens.push_back(tok.substr(0, tok.size() - 1));
                    tokens.push_back(":");
                } else {
                    tokens.push_back(tok);
                }
            }
        }
    }

    auto is_number = [](const std::string& s) {
        char* end = nullptr;
        std::strtod(s.c_str(), &end);
        return end && *end == '\0' && end != s.c_str();
    };
    auto lower = [](std::string s) {
        for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };

    enum class Section { None, Objective, Constraints, Bounds, Binary, End };
    Section section = Section::None;

    struct RawExpr {
        std::vector<std::pair<double, std::string>> terms;
        double constant = 0.0;
    };
    struct RawConstraint {
        std::string name;
        RawExpr expr;
        int sense = 0;  // -1/0/+1
        double rhs = 0.0;
    };
    RawExpr objective;
    std::vector<RawConstraint> constraints;
    struct Bound {
        double lower = 0.0, upper = kInf;
        bool lower_set = false, upper_set = false, free = false;
    };
    std::map<std::string, Bound> bounds;
    std::vector<std::string> binaries;

    size_t i = 0;
    auto peek = [&]() -> const std::string& {
        static const std::string empty;
        return i < tokens.size() ? tokens[i] : empty;
    };
    auto section_keyword = [&](const std::string& tok) -> Section {
        const std::string k = lower(tok);
        if (k == "minimize" || k == "min") return Section::Objective;
        if (k == "subject") return Section::Constraints;  // "Subject To"
        if (k == "st" || k == "s.t.") return Section::Constraints;
        if (k == "bounds") return Section::Bounds;
        if (k == "binary" || k == "binaries" || k == "bin") return Section::Binary;
        if (k == "end") return Section::End;
        return Section::None;
    };

    // expression parser: [name ':'] (sign? coef? var | sign? number)*
    auto parse_expr = [&](RawExpr& out, int* sense_out, double* rhs_out) {
        double sign = 1.0;
        bool pending_coef = false;
        double coef = 1.0;
        auto flush_constant = [&]() {
            if (pending_coef) {
                out.constant += sign * coef;
                pending_coef = false;
                sign = 1.0;
            }
        };
        while (i < tokens.size()) {
            const std::string& tok = tokens[i];
            if (section_keyword(tok) != Section::None) {  // section break
                flush_constant();
                return;
            }
            if (tok == ":") {
                throw std::runtime_error("parse_lp: unexpected ':'");
            }
            if (i + 1 < tokens.size() && tokens[i + 1] == ":") {  // next row begins
                flush_constant();
                return;
            }
            if (tok == "+") {
                sign = 1.0;
                ++i;
                continue;
            }
            if (tok == "-") {
                sign = -sign;
                ++i;
                continue;
            }
            if (tok == "<=" || tok == ">=" || tok == "=" || tok == "<" || tok == ">") {
                if (!sense_out) throw std::runtime_error("parse_lp: relation in objective");
                *sense_out = (tok[0] == '<') ? -1 : (tok[0] == '>') ? 1 : 0;
                ++i;
                if (i >= tokens.size() || !is_number(tokens[i]))
                    throw std::runtime_error("parse_lp: missing rhs");
                *rhs_out = std::stod(tokens[i]);
                ++i;
                return;
            }
            if (is_number(tok)) {
                if (pending_coef) {  // bare number after number: constant then coef
                    out.constant += sign * coef;
                    sign = 1.0;
                }
                coef = std::stod(tok);
                pending_coef = true;
                ++i;
                continue;
            }
            // variable name
            out.terms.emplace_back(sign * (pending_coef ? coef : 1.0), tok);
            pending_coef = false;
            sign = 1.0;
            ++i;
        }
        if (pending_coef) out.constant += sign * coef;
    };

    while (i < tokens.size()) {
        const Section s = section_keyword(peek());
        if (s != Section::None) {
            if (s == Section::Constraints && lower(peek()) == "subject") i += 2;  // "Subject To"
            else ++i;
            section = s;
            if (section == Section::End) break;
            continue;
        }
        switch (section) {
            case Section::Objective: {
                if (i + 1 < tokens.size() && tokens[i + 1] == ":") i += 2;  // "obj:"
                parse_expr(objective, nullptr, nullptr);
                break;
            }
            case Section::Constraints: {
                RawConstraint rc;
                if (i + 1 < tokens.size() && tokens[i + 1] == ":") {
                    rc.name = tokens[i];
                    i += 2;
                }
                parse_expr(rc.expr, &rc.sense, &rc.rhs);
                constraints.push_back(std::move(rc));
                break;
            }
            case Section::Bounds: {
                // forms: "x free" | "x <= u" | "x >= l" | "x = v" | "l <= x <= u"
                std::vector<std::string> row;
                while (i < tokens.size() && section_keyword(peek()) == Section::None) {
                    row.push_back(tokens[i]);
                    ++i;
                    // a bounds row always starts with number-or-name and is at
                    // most 5 tokens; detect row end by lookahead
                    if (row.size() == 2 && lower(row[1]) == "free") break;
                    if (row.size() == 3 && !is_number(row[0])) break;
                    if (row.size() == 5) break;
                }
                if (row.size() == 2 && lower(row[1]) == "free") {
                    bounds[row[0]].free = true;
                } else if (row.size() == 3 && !is_number(row[0])) {
                    Bound& b = bounds[row[0]];
                    if (row[1] == "<=") {
                        b.upper = std::stod(row[2]);
                        b.upper_set = true;
                    } else if (row[1] == ">=") {
                        b.lower = std::stod(row[2]);
                        b.lower_set = true;
                    } else if (row[1] == "=") {
                        b.lower = b.upper = std::stod(row[2]);
                        b.lower_set = b.upper_set = true;
                    } else {
                        throw std::runtime_error("parse_lp: bad bounds row");
                    }
                } else if (row.size() == 5 && row[1] == "<=" && row[3] == "<=") {
                    Bound& b = bounds[row[2]];
                    b.lower = std::stod(row[0]);
                    b.upper = std::stod(row[4]);
                    b.lower_set = b.upper_set = true;
                } else {
                    throw std::runtime_error("parse_lp: unrecognized bounds row");
                }
                break;
            }
            case Section::Binary: {
                binaries.push_back(tokens[i]);
                ++i;
                break;
            }
            default:
                throw std::runtime_error("parse_lp: token outside any section: " + peek());
        }
    }

    // assemble: variables appear in objective/constraints/bounds/binary order
    MILPModel model;
    std::map<std::string, VarRef> vars;
    std::vector<std::string> var_order;
    auto touch = [&](const std::string& name) {
        if (!vars.count(name)) {
            vars[name] = VarRef{-1};
            var_order.push_back(name);
        }
    };
    for (const auto& [c, name] : objective.terms) touch(name), (void)c;
    for (const auto& rc : constraints)
        for (const auto& [c, name] : rc.expr.terms) touch(name), (void)c;
    for (const auto& [name, b] : bounds) touch(name), (void)b;
    for (const auto& name : binaries) touch(name);

    for (const auto& name : var_order) {
        bool is_binary = false;
        for (const auto& b : binaries) is_binary = is_binary || b == name;
        if (is_binary) {
            vars[name] = model.add_binary(name);
            continue;
        }
        Bound b;
        if (auto it = bounds.find(name); it != bounds.end()) b = it->second;
        double lo = b.free ? -kInf : b.lower;
        double hi = b.upper;
        vars[name] = model.add_var(name, lo, hi);
    }

    LinearExpr obj;
    obj.add_constant(objective.constant);
    for (const auto& [c, name] : objective.terms) obj.add(c, vars.at(name));
    model.set_objective(std::move(obj));

    for (const auto& rc : constraints) {
        LinearExpr e;
        e.add_constant(rc.expr.constant);
        for (const auto& [c, name] : rc.expr.terms) e.add(c, vars.at(name));
        const Sense sense = rc.sense < 0   ? Sense::LessEqual
                            : rc.sense > 0 ? Sense::GreaterEqual
                                           : Sense::Equal;
        model.add_constraint(rc.name, std::move(e), sense, rc.rhs);
    }
    return model;
}

}  // namespace testsupport
