#include "gridsizer/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gridsizer {

namespace {

constexpr int kMonthDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

std::string at_pos(int day, int hour) {
    return "(day " + std::to_string(day) + ", hour " + std::to_string(hour) + ")";
}

}  // namespace

ResolutionMode resolution_from_string(const std::string& s) {
    if (s == "365day") return ResolutionMode::Full365;
    if (s == "12day") return ResolutionMode::Typical12;
    if (s == "1day") return ResolutionMode::Single1;
    throw ValidationError("unknown resolution '" + s + "' (expected 365day, 12day or 1day)");
}

std::string to_string(ResolutionMode m) {
    switch (m) {
        case ResolutionMode::Full365: return "365day";
        case ResolutionMode::Typical12: return "12day";
        case ResolutionMode::Single1: return "1day";
    }
    return "?";
}

int resolution_days(ResolutionMode m) {
    switch (m) {
        case ResolutionMode::Full365: return 365;
        case ResolutionMode::Typical12: return 12;
        case ResolutionMode::Single1: return 1;
    }
    return 0;
}

double resolution_alpha(ResolutionMode m) {
    switch (m) {
        case ResolutionMode::Full365: return 1.0;
        case ResolutionMode::Typical12: return 30.42;
        case ResolutionMode::Single1: return 365.0;
    }
    return 0.0;
}

void ScenarioParams::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ValidationError("scenario parameters: " + what);
    };
    require(soc_min >= 0.0 && soc_min < soc_max && soc_max <= 1.0,
            "need 0 <= soc_min < soc_max <= 1");
    require(eta > 0.0 && eta <= 1.0, "need 0 < eta <= 1");
    require(dod_nominal > 0.0 && dod_nominal <= 1.0, "need 0 < dod_nominal <= 1");
    require(dg_op_cost >= 0.0 && dg_noload_cost >= 0.0 && dg_capital >= 0.0 &&
                pv_capital >= 0.0 && bess_capital >= 0.0 && pv_rep_frac >= 0.0 &&
                bess_rep_frac >= 0.0 && pv_deg_rate >= 0.0,
            "cost fields must be >= 0");
    require(t_chg > 0.0 && t_dchg > 0.0, "charge/discharge durations must be > 0");
    require(planning_years >= 1, "planning_years must be >= 1");
    require(dg_pmin >= 0.0, "dg_pmin must be >= 0");
    require(big_m >= 0.0, "big_m must be >= 0");
}

double Profiles::peak_load() const {
    double peak = 0.0;
    for (const auto& day : load)
        for (double v : day) peak = std::max(peak, v);
    return peak;
}

double Profiles::total_load() const {
    double s = 0.0;
    for (const auto& day : load)
        for (double v : day) s += v;
    return s;
}

void Profiles::validate() const {
    if (load.empty()) throw ValidationError("profiles: no days");
    const size_t hours = load[0].size();
    if (hours == 0) throw ValidationError("profiles: no hours");
    if (pv_unit.size() != load.size())
        throw ValidationError("profiles: load and pv_unit day counts differ");
    for (size_t d = 0; d < load.size(); ++d) {
        if (load[d].size() != hours || pv_unit[d].size() != hours)
            throw ValidationError("profiles: ragged hour count at day " + std::to_string(d + 1));
        for (size_t t = 0; t < hours; ++t) {
            if (!(load[d][t] >= 0.0))
                throw ValidationError("profiles: negative load at " +
                                      at_pos(static_cast<int>(d + 1), static_cast<int>(t + 1)));
            if (!(pv_unit[d][t] >= 0.0 && pv_unit[d][t] <= 1.0))
                throw ValidationError("profiles: pv_unit outside [0,1] at " +
                                      at_pos(static_cast<int>(d + 1), static_cast<int>(t + 1)));
        }
    }
    const double n_days = static_cast<double>(load.size());
    if (std::fabs(alpha * n_days - 365.0) > 0.005 * 365.0)
        throw ValidationError("profiles: alpha * days = " + std::to_string(alpha * n_days) +
                              " deviates from 365 by more than 0.5%");
}

CycleLifeCurve CycleLifeCurve::table_default() {
    return CycleLifeCurve{{{10, 14500},
                           {20, 12000},
                           {30, 9600},
                           {40, 7500},
                           {50, 5800},
                           {60, 4600},
                           {70, 3400},
                           {80, 3000},
                           {90, 2200},
                           {100, 2000}}};
}

void CycleLifeCurve::validate() const {
    if (knots.size() < 2) throw ValidationError("cycle life curve: need at least 2 knots");
    for (size_t i = 0; i < knots.size(); ++i) {
        if (!(knots[i].first > 0.0 && knots[i].first <= 100.0))
            throw ValidationError("cycle life curve: dod percent must be in (0,100]");
        if (knots[i].second <= 0.0)
            throw ValidationError("cycle life curve: cycles must be > 0");
        if (i > 0) {
            if (knots[i].first <= knots[i - 1].first)
                throw ValidationError("cycle life curve: dod percents must strictly increase");
            if (knots[i].second >= knots[i - 1].second)
                throw ValidationError("cycle life curve: cycles must strictly decrease");
        }
    }
}

double cycle_life_at(const CycleLifeCurve& curve, double dod) {
    curve.validate();
    if (!(dod > 0.0 && dod <= 1.0))
        throw std::domain_error("cycle_life_at: dod must be in (0,1], got " + std::to_string(dod));
    const double pct = dod * 100.0;
    const auto& k = curve.knots;
    if (pct <= k.front().first) return k.front().second;  // clamp below first knot
    if (pct >= k.back().first) return k.back().second;
    for (size_t i = 1; i < k.size(); ++i) {
        if (pct <= k[i].first) {
            const double x0 = k[i - 1].first, y0 = k[i - 1].second;
            const double x1 = k[i].first, y1 = k[i].second;
            return y0 + (y1 - y0) * (pct - x0) / (x1 - x0);
        }
    }
    return k.back().second;
}

namespace {

struct CsvSeries {
    // (day, hour) -> value, plus the encountered day set
    std::map<std::pair<int, int>, double> cells;
    std::set<int> days;
};

CsvSeries read_profile_csv(const std::string& path, const char* label) {
    std::ifstream in(path);
    if (!in) throw ValidationError(std::string(label) + " file not readable: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(std::string(label) + " file empty: " + path);
    // tolerate UTF-8 BOM and surrounding whitespace in the header
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line != "day,hour,value")
        throw ValidationError(std::string(label) + " file " + path +
                              ": expected header 'day,hour,value', got '" + line + "'");

    CsvSeries series;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string d_str, h_str, v_str;
        if (!std::getline(ss, d_str, ',') || !std::getline(ss, h_str, ',') ||
            !std::getline(ss, v_str))
            throw ValidationError(std::string(label) + " file " + path + " line " +
                                  std::to_string(line_no) + ": expected day,hour,value");
        int day = 0, hour = 0;
        double value = 0.0;
        try {
            day = std::stoi(d_str);
            hour = std::stoi(h_str);
            value = std::stod(v_str);
        } catch (const std::exception&) {
            throw ValidationError(std::string(label) + " file " + path + " line " +
                                  std::to_string(line_no) + ": unparsable row '" + line + "'");
        }
        if (hour < 1 || hour > 24)
            throw ValidationError(std::string(label) + " file " + path + ": hour out of 1..24 at " +
                                  at_pos(day, hour));
        if (day < 1)
            throw ValidationError(std::string(label) + " file " + path + ": day must be >= 1 at " +
                                  at_pos(day, hour));
        if (!series.cells.emplace(std::make_pair(day, hour), value).second)
            throw ValidationError(std::string(label) + " file " + path + ": duplicate row at " +
                                  at_pos(day, hour));
        series.days.insert(day);
    }
    if (series.cells.empty()) throw ValidationError(std::string(label) + " file has no data rows");
    return series;
}

}  // namespace

Profiles load_profiles(const std::string& load_path, const std::string& pv_path) {
    CsvSeries load_series = read_profile_csv(load_path, "load");
    CsvSeries pv_series = read_profile_csv(pv_path, "pv");

    if (load_series.days != pv_series.days) {
        for (int d : load_series.days)
            if (!pv_series.days.count(d))
                throw ValidationError("day " + std::to_string(d) +
                                      " present in load file but missing from pv file");
        for (int d : pv_series.days)
            if (!load_series.days.count(d))
                throw ValidationError("day " + std::to_string(d) +
                                      " present in pv file but missing from load file");
    }
    const int num_days = static_cast<int>(load_series.days.size());
    if (*load_series.days.begin() != 1 || *load_series.days.rbegin() != num_days)
        throw ValidationError("day indices must be contiguous 1.." + std::to_string(num_days));

    Profiles p;
    p.load.assign(static_cast<size_t>(num_days), std::vector<double>(24, 0.0));
    p.pv_unit.assign(static_cast<size_t>(num_days), std::vector<double>(24, 0.0));
    for (int d = 1; d <= num_days; ++d) {
        for (int t = 1; t <= 24; ++t) {
            auto lit = load_series.cells.find({d, t});
            if (lit == load_series.cells.end())
                throw ValidationError("load file missing hour at " + at_pos(d, t));
            auto pit = pv_series.cells.find({d, t});
            if (pit == pv_series.cells.end())
                throw ValidationError("pv file missing hour at " + at_pos(d, t));
            if (lit->second < 0.0)
                throw ValidationError("negative load " + std::to_string(lit->second) + " at " +
                                      at_pos(d, t));
            if (pit->second < 0.0 || pit->second > 1.0)
                throw ValidationError("pv_unit " + std::to_string(pit->second) +
                                      " outside [0,1] at " + at_pos(d, t));
            p.load[static_cast<size_t>(d - 1)][static_cast<size_t>(t - 1)] = lit->second;
            p.pv_unit[static_cast<size_t>(d - 1)][static_cast<size_t>(t - 1)] = pit->second;
        }
    }

    if (num_days == 365) {
        p.alpha = 1.0;
    } else if (num_days == 12) {
        p.alpha = 30.42;
    } else if (num_days == 1) {
        p.alpha = 365.0;
    } else {
        p.alpha = 365.0 / num_days;
    }
    p.validate();
    return p;
}

Profiles resample(const Profiles& p, ResolutionMode mode) {
    p.validate();
    if (mode == ResolutionMode::Full365) {
        if (p.num_days() != 365)
            throw ValidationError("cannot resample a " + std::to_string(p.num_days()) +
                                  "-day profile to 365day resolution (coarser to finer)");
        return p;
    }
    if (p.num_days() != 365)
        throw ValidationError("resampling requires a 365-day calendar profile, got " +
                              std::to_string(p.num_days()) + " days (coarser to finer refused)");
    if (p.hours_per_day() != 24)
        throw ValidationError("resampling requires 24 hours per day");

    Profiles out;
    const int target_days = resolution_days(mode);
    out.alpha = resolution_alpha(mode);
    out.load.assign(static_cast<size_t>(target_days), std::vector<double>(24, 0.0));
    out.pv_unit.assign(static_cast<size_t>(target_days), std::vector<double>(24, 0.0));

    if (mode == ResolutionMode::Single1) {
        for (int t = 0; t < 24; ++t) {
            double load_sum = 0.0, pv_sum = 0.0;
            for (int d = 0; d < 365; ++d) {
                load_sum += p.load[static_cast<size_t>(d)][static_cast<size_t>(t)];
                pv_sum += p.pv_unit[static_cast<size_t>(d)][static_cast<size_t>(t)];
            }
            out.load[0][static_cast<size_t>(t)] = load_sum / 365.0;
            out.pv_unit[0][static_cast<size_t>(t)] = pv_sum / 365.0;
        }
    } else {  // Typical12, one mean day per calendar month
        int day0 = 0;
        for (int m = 0; m < 12; ++m) {
            const int len = kMonthDays[m];
            for (int t = 0; t < 24; ++t) {
                double load_sum = 0.0, pv_sum = 0.0;
                for (int d = day0; d < day0 + len; ++d) {
                    load_sum += p.load[static_cast<size_t>(d)][static_cast<size_t>(t)];
                    pv_sum += p.pv_unit[static_cast<size_t>(d)][static_cast<size_t>(t)];
                }
                out.load[static_cast<size_t>(m)][static_cast<size_t>(t)] = load_sum / len;
                out.pv_unit[static_cast<size_t>(m)][static_cast<size_t>(t)] = pv_sum / len;
            }
            day0 += len;
        }
    }
    out.validate();
    return out;
}

namespace {

CycleLifeCurve parse_cycle_life(const std::string& text) {
    // format: "10:14500,20:12000,..."
    CycleLifeCurve curve;
    std::istringstream ss(text);
    std::string pair;
    while (std::getline(ss, pair, ',')) {
        auto colon = pair.find(':');
        if (colon == std::string::npos)
            throw ValidationError("cycle_life: expected dod%:cycles pairs, got '" + pair + "'");
        curve.knots.emplace_back(std::stod(pair.substr(0, colon)),
                                 std::stod(pair.substr(colon + 1)));
    }
    curve.validate();
    return curve;
}

}  // namespace

ScenarioConfig load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("parameter file not readable: " + path);
    ScenarioConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        auto trim = [](std::string s) {
            const char* ws = " \t\r";
            s.erase(0, s.find_first_not_of(ws));
            auto end = s.find_last_not_of(ws);
            s.erase(end == std::string::npos ? 0 : end + 1);
            return s;
        };
        if (eq == std::string::npos) {
            if (!trim(line).empty())
                throw ValidationError(path + " line " + std::to_string(line_no) +
                                      ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "dg_op_cost") cfg.params.dg_op_cost = std::stod(value);
            else if (key == "dg_noload_cost") cfg.params.dg_noload_cost = std::stod(value);
            else if (key == "dg_capital") cfg.params.dg_capital = std::stod(value);
            else if (key == "pv_capital") cfg.params.pv_capital = std::stod(value);
            else if (key == "pv_rep_frac") cfg.params.pv_rep_frac = std::stod(value);
            else if (key == "pv_deg_rate") cfg.params.pv_deg_rate = std::stod(value);
            else if (key == "bess_capital") cfg.params.bess_capital = std::stod(value);
            else if (key == "bess_rep_frac") cfg.params.bess_rep_frac = std::stod(value);
            else if (key == "t_chg") cfg.params.t_chg = std::stod(value);
            else if (key == "t_dchg") cfg.params.t_dchg = std::stod(value);
            else if (key == "eta") cfg.params.eta = std::stod(value);
            else if (key == "soc_min") cfg.params.soc_min = std::stod(value);
            else if (key == "soc_max") cfg.params.soc_max = std::stod(value);
            else if (key == "dod_nominal") cfg.params.dod_nominal = std::stod(value);
            else if (key == "dg_pmin") cfg.params.dg_pmin = std::stod(value);
            else if (key == "planning_years") cfg.params.planning_years = std::stoi(value);
            else if (key == "big_m") cfg.params.big_m = std::stod(value);
            else if (key == "u_dg_init") cfg.params.u_dg_init = std::stod(value);  // unused
            else if (key == "cycle_life") cfg.curve = parse_cycle_life(value);
            else
                throw ValidationError(path + " line " + std::to_string(line_no) +
                                      ": unknown parameter '" + key + "'");
        } catch (const ValidationError&) {
            throw;
        } catch (const std::exception&) {
            throw ValidationError(path + " line " + std::to_string(line_no) +
                                  ": unparsable value for '" + key + "'");
        }
    }
    cfg.params.validate();
    cfg.curve.validate();
    return cfg;
}

double effective_big_m(const ScenarioParams& params, const Profiles& profiles) {
    const double peak = profiles.peak_load();
    if (params.big_m == 0.0) {
        double m = 10.0 * peak;
        if (m <= 0.0) m = 1.0;  // all-zero load still needs a positive cap
        return m;
    }
    if (params.big_m < peak)
        throw ValidationError("big_m = " + std::to_string(params.big_m) +
                              " is below the profile peak load " + std::to_string(peak));
    return params.big_m;
}

}  // namespace gridsizer
