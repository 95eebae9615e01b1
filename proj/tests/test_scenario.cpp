#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "gridsizer/scenario.hpp"

using namespace gridsizer;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("gridsizer_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

// writes a day,hour,value CSV for `days` full days from a generator
template <typename F>
fs::path write_csv(const fs::path& dir, const std::string& name, int days, F value) {
    fs::path p = dir / name;
    std::ofstream out(p);
    out << "day,hour,value\n";
    for (int d = 1; d <= days; ++d)
        for (int t = 1; t <= 24; ++t) out << d << "," << t << "," << value(d, t) << "\n";
    return p;
}

Profiles make_year(double load_value = 0.5, double pv_value = 0.25) {
    Profiles p;
    p.load.assign(365, std::vector<double>(24, load_value));
    p.pv_unit.assign(365, std::vector<double>(24, pv_value));
    p.alpha = 1.0;
    return p;
}

// xorshift generator for reproducible pseudo-random tests
struct Rng {
    uint64_t s;
    explicit Rng(uint64_t seed) : s(seed) {}
    uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    double uniform() { return static_cast<double>(next() % 1000000) / 1000000.0; }
};

}  // namespace

TEST_CASE("load_profiles accepts valid files and assigns alpha by day count") {
    TempDir tmp;
    SUBCASE("365-day files give alpha 1") {
        auto load = write_csv(tmp.path, "load.csv", 365, [](int, int) { return 0.3; });
        auto pv = write_csv(tmp.path, "pv.csv", 365, [](int, int t) { return t == 12 ? 0.9 : 0.0; });
        Profiles p = load_profiles(load.string(), pv.string());
        CHECK(p.num_days() == 365);
        CHECK(p.hours_per_day() == 24);
        CHECK(p.alpha == doctest::Approx(1.0));
    }
    SUBCASE("12-day files give alpha 30.42") {
        auto load = write_csv(tmp.path, "load.csv", 12, [](int, int) { return 0.3; });
        auto pv = write_csv(tmp.path, "pv.csv", 12, [](int, int) { return 0.1; });
        Profiles p = load_profiles(load.string(), pv.string());
        CHECK(p.alpha == doctest::Approx(30.42));
    }
    SUBCASE("1-day files give alpha 365") {
        auto load = write_csv(tmp.path, "load.csv", 1, [](int, int) { return 0.3; });
        auto pv = write_csv(tmp.path, "pv.csv", 1, [](int, int) { return 0.1; });
        Profiles p = load_profiles(load.string(), pv.string());
        CHECK(p.alpha == doctest::Approx(365.0));
    }
}

TEST_CASE("load_profiles rejects malformed inputs with row-level positions") {
    TempDir tmp;
    SUBCASE("pv_unit above 1 names the offending day and hour") {
        auto load = write_csv(tmp.path, "load.csv", 2, [](int, int) { return 0.3; });
        auto pv = write_csv(tmp.path, "pv.csv", 2,
                            [](int d, int t) { return (d == 2 && t == 7) ? 1.2 : 0.5; });
        CHECK_THROWS_WITH_AS(load_profiles(load.string(), pv.string()),
                             doctest::Contains("(day 2, hour 7)"), ValidationError);
    }
    SUBCASE("negative load is rejected") {
        auto load = write_csv(tmp.path, "load.csv", 1,
                              [](int, int t) { return t == 3 ? -0.1 : 0.4; });
        auto pv = write_csv(tmp.path, "pv.csv", 1, [](int, int) { return 0.0; });
        CHECK_THROWS_WITH_AS(load_profiles(load.string(), pv.string()),
                             doctest::Contains("hour 3"), ValidationError);
    }
    SUBCASE("missing hour is rejected") {
        fs::path load = tmp.path / "load.csv";
        {
            std::ofstream out(load);
            out << "day,hour,value\n";
            for (int t = 1; t <= 24; ++t)
                if (t != 13) out << "1," << t << ",0.2\n";
        }
        auto pv = write_csv(tmp.path, "pv.csv", 1, [](int, int) { return 0.0; });
        CHECK_THROWS_WITH_AS(load_profiles(load.string(), pv.string()),
                             doctest::Contains("hour 13"), ValidationError);
    }
    SUBCASE("mismatched day sets are rejected") {
        auto load = write_csv(tmp.path, "load.csv", 2, [](int, int) { return 0.3; });
        auto pv = write_csv(tmp.path, "pv.csv", 1, [](int, int) { return 0.1; });
        CHECK_THROWS_AS(load_profiles(load.string(), pv.string()), ValidationError);
    }
    SUBCASE("bad header is rejected") {
        fs::path load = tmp.path / "load.csv";
        {
            std::ofstream out(load);
            out << "d,h,v\n1,1,0.2\n";
        }
        auto pv = write_csv(tmp.path, "pv.csv", 1, [](int, int) { return 0.0; });
        CHECK_THROWS_AS(load_profiles(load.string(), pv.string()), ValidationError);
    }
}

TEST_CASE("resample: constant profile stays constant in every mode") {
    Profiles year = make_year(0.5, 0.25);
    for (ResolutionMode mode : {ResolutionMode::Typical12, ResolutionMode::Single1}) {
        Profiles r = resample(year, mode);
        CHECK(r.num_days() == resolution_days(mode));
        CHECK(r.alpha == doctest::Approx(resolution_alpha(mode)));
        for (const auto& day : r.load)
            for (double v : day) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("resample Single1: hour means recomputed independently") {
    Profiles year = make_year(0.0, 0.0);
    Rng rng(42);
    for (int d = 0; d < 365; ++d)
        for (int t = 0; t < 24; ++t) year.load[d][t] = rng.uniform();
    Profiles r = resample(year, ResolutionMode::Single1);
    for (int t = 0; t < 24; ++t) {
        double sum = 0.0;
        for (int d = 0; d < 365; ++d) sum += year.load[d][t];
        CHECK(r.load[0][t] == doctest::Approx(sum / 365.0).epsilon(1e-12));
    }
}

TEST_CASE("resample Typical12: per-month means on the non-leap calendar") {
    Profiles year = make_year(0.0, 0.0);
    // January (days 1..31) loaded at 1.0, everything else zero
    for (int d = 0; d < 31; ++d)
        for (int t = 0; t < 24; ++t) year.load[d][t] = 1.0;
    Profiles r = resample(year, ResolutionMode::Typical12);
    REQUIRE(r.num_days() == 12);
    for (int t = 0; t < 24; ++t) {
        CHECK(r.load[0][t] == doctest::Approx(1.0));
        for (int m = 1; m < 12; ++m) CHECK(r.load[m][t] == doctest::Approx(0.0));
    }
}

TEST_CASE("resample conserves energy under its own weighting") {
    Profiles year = make_year(0.0, 0.0);
    Rng rng(7);
    for (int d = 0; d < 365; ++d)
        for (int t = 0; t < 24; ++t) year.load[d][t] = 0.05 + 0.7 * rng.uniform();
    const double original = year.total_load();  // alpha 1

    SUBCASE("Single1 conserves exactly") {
        Profiles r = resample(year, ResolutionMode::Single1);
        CHECK(r.total_load() * r.alpha == doctest::Approx(original).epsilon(1e-9));
    }
    SUBCASE("Typical12: month-weighted sum is exact, alpha-weighted within 0.5%") {
        Profiles r = resample(year, ResolutionMode::Typical12);
        constexpr int kMonthDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        double month_weighted = 0.0;
        for (int m = 0; m < 12; ++m)
            for (int t = 0; t < 24; ++t) month_weighted += kMonthDays[m] * r.load[m][t];
        CHECK(month_weighted == doctest::Approx(original).epsilon(1e-9));
        CHECK(r.total_load() * r.alpha ==
              doctest::Approx(original).epsilon(0.005));
    }
}

TEST_CASE("resample refuses coarser-to-finer requests") {
    Profiles year = make_year();
    Profiles twelve = resample(year, ResolutionMode::Typical12);
    CHECK_THROWS_AS(resample(twelve, ResolutionMode::Typical12), ValidationError);
    CHECK_THROWS_AS(resample(twelve, ResolutionMode::Full365), ValidationError);
    Profiles one = resample(year, ResolutionMode::Single1);
    CHECK_THROWS_AS(resample(one, ResolutionMode::Typical12), ValidationError);
}

TEST_CASE("cycle_life_at: knots, interpolation, clamping and errors") {
    const CycleLifeCurve curve = CycleLifeCurve::table_default();
    CHECK(cycle_life_at(curve, 0.80) == doctest::Approx(3000.0));
    CHECK(cycle_life_at(curve, 1.00) == doctest::Approx(2000.0));
    CHECK(cycle_life_at(curve, 0.15) == doctest::Approx(13250.0));
    CHECK(cycle_life_at(curve, 0.05) == doctest::Approx(14500.0));  // clamp below first knot
    CHECK(cycle_life_at(curve, 0.10) == doctest::Approx(14500.0));
    CHECK_THROWS_AS(cycle_life_at(curve, 0.0), std::domain_error);
    CHECK_THROWS_AS(cycle_life_at(curve, 1.2), std::domain_error);
    CHECK_THROWS_AS(cycle_life_at(curve, -0.5), std::domain_error);
}

TEST_CASE("cycle_life_at is monotonically non-increasing") {
    const CycleLifeCurve curve = CycleLifeCurve::table_default();
    Rng rng(99);
    for (int i = 0; i < 500; ++i) {
        double a = 0.001 + 0.999 * rng.uniform();
        double b = 0.001 + 0.999 * rng.uniform();
        if (a > b) std::swap(a, b);
        CHECK(cycle_life_at(curve, a) >= cycle_life_at(curve, b) - 1e-9);
    }
}

TEST_CASE("parameter file loading: defaults, overrides and rejection") {
    TempDir tmp;
    SUBCASE("bundled defaults parse and match the built-in values") {
        ScenarioConfig cfg = load_params(std::string(GRIDSIZER_DATA_DIR) + "/params_default.conf");
        CHECK(cfg.params.dg_op_cost == doctest::Approx(44.75));
        CHECK(cfg.params.bess_capital == doctest::Approx(469000.0));
        CHECK(cfg.params.planning_years == 25);
        CHECK(cfg.curve.knots.size() == 10);
        CHECK(cfg.curve.knots[7].second == doctest::Approx(3000.0));
    }
    SUBCASE("unknown keys are rejected by name") {
        fs::path p = tmp.path / "bad.conf";
        {
            std::ofstream out(p);
            out << "dg_op_cost = 10\nnot_a_key = 5\n";
        }
        CHECK_THROWS_WITH_AS(load_params(p.string()), doctest::Contains("not_a_key"),
                             ValidationError);
    }
    SUBCASE("invariant violations are rejected") {
        fs::path p = tmp.path / "bad2.conf";
        {
            std::ofstream out(p);
            out << "soc_min = 0.9\nsoc_max = 0.2\n";
        }
        CHECK_THROWS_AS(load_params(p.string()), ValidationError);
    }
}

TEST_CASE("effective_big_m derives or validates against peak load") {
    Profiles p = make_year(0.8, 0.0);
    ScenarioParams params;
    params.big_m = 0.0;
    CHECK(effective_big_m(params, p) == doctest::Approx(8.0));
    params.big_m = 5.0;
    CHECK(effective_big_m(params, p) == doctest::Approx(5.0));
    params.big_m = 0.5;  // below peak
    CHECK_THROWS_AS(effective_big_m(params, p), ValidationError);
}
