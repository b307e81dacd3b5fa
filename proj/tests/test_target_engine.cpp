#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rainrule/error.hpp"
#include "rainrule/target_engine.hpp"

using namespace rainrule;

namespace {

// Coefficients of the two-wickets-down ODI curve from the worked example.
const PolyFit kExampleFit{-0.0031, 1.0298, 0.0, 3, 0.0};

InterruptionScenario example_scenario() {
    InterruptionScenario s;
    s.n = 120;
    s.m = 180;
    s.N = 300;
    s.target_score = 275;
    s.current_score = 100;
    s.wickets_at_stoppage = 2;
    return s;
}

double quad_lost(const PolyFit& f, double lo, double hi) {
    return oracle::adaptive_simpson([&](double x) { return oracle::cubic(f.a, f.b, f.c, x); }, lo, hi);
}

}  // namespace

TEST_CASE("area_full of f(x) = x over two balls") {
    CHECK(area_full(PolyFit{0, 0, 1, 3, 0}, 2) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("area_full on the worked-example curve") {
    // Exact rational value 2,990,700; Simpson is exact on cubics.
    const double quad = quad_lost(kExampleFit, 0, 300);
    CHECK(quad == doctest::Approx(2990700.0).epsilon(1e-12));
    CHECK(area_full(kExampleFit, 300) == doctest::Approx(2990700.0).epsilon(1e-12));
}

TEST_CASE("area_interrupted on the worked-example scenario") {
    // Frozen from exact rational evaluation: 2,234,793.6.
    const double oracle_value = quad_lost(kExampleFit, 0, 120) + quad_lost(kExampleFit, 180, 300);
    CHECK(std::abs(oracle_value - 2234793.6) < 1e-6);
    CHECK(std::abs(area_interrupted(kExampleFit, 120, 180, 300) - 2234793.6) < 0.1);
}

TEST_CASE("area_interrupted identities") {
    for (int n : {0, 1, 57, 150, 300}) {
        CHECK(area_interrupted(kExampleFit, n, n, 300) == doctest::Approx(area_full(kExampleFit, 300)).epsilon(1e-12));
    }
    CHECK(area_interrupted(kExampleFit, 0, 300, 300) == 0.0);
    CHECK(area_interrupted(PolyFit{0.3, -2, 5, 3, 0}, 0, 77, 77) == 0.0);
}

TEST_CASE("area_interrupted rejects unordered intervals") {
    CHECK_THROWS_AS(area_interrupted(kExampleFit, 200, 180, 300), Error);
    CHECK_THROWS_AS(area_interrupted(kExampleFit, 120, 301, 300), Error);
    CHECK_THROWS_AS(area_interrupted(kExampleFit, -1, 10, 300), Error);
    try {
        area_interrupted(kExampleFit, 200, 180, 300);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_scenario);
    }
}

TEST_CASE("resource_ratio") {
    auto s = example_scenario();
    CHECK(resource_ratio(kExampleFit, s) == doctest::Approx(0.7472476677700872).epsilon(1e-12));

    s.m = s.n;
    CHECK(resource_ratio(kExampleFit, s) == doctest::Approx(1.0).epsilon(1e-12));

    s.n = 0;
    s.m = s.N;
    CHECK(resource_ratio(kExampleFit, s) == 0.0);
}

TEST_CASE("resource_ratio needs a curve with positive area") {
    auto s = example_scenario();
    try {
        resource_ratio(PolyFit{0, -1, 0, 2, 0}, s);
        FAIL("expected degenerate_curve");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::degenerate_curve);
    }
}

TEST_CASE("revise_target reproduces the worked example") {
    const auto r = revise_target(kExampleFit, example_scenario());
    CHECK(r.ratio == doctest::Approx(0.74725).epsilon(1e-4));
    CHECK(r.runs_remaining == doctest::Approx(130.7683418597653).epsilon(1e-12));
    CHECK(r.revised_total == 230);
    CHECK(r.to_win() == 231);
}

TEST_CASE("revise_target with no balls lost returns the original target") {
    auto s = example_scenario();
    for (int n : {0, 13, 120, 299, 300}) {
        s.n = s.m = n;
        CHECK(revise_target(kExampleFit, s).revised_total == s.target_score);
    }
}

TEST_CASE("scenario validation names the field") {
    auto s = example_scenario();
    s.current_score = 275;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("current_score"), Error);
    s = example_scenario();
    s.m = 100;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("m:"), Error);
    s = example_scenario();
    s.wickets_at_stoppage = 11;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("wickets"), Error);
    s = example_scenario();
    s.N = 0;
    CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("one run to win stays within one run of the current score") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 500; ++k) {
        InterruptionScenario s;
        s.N = 120 + static_cast<int>(rng() % 181);
        s.n = static_cast<int>(rng() % (s.N + 1));
        s.m = s.n + static_cast<int>(rng() % (s.N - s.n + 1));
        s.current_score = static_cast<int>(rng() % 300);
        s.target_score = s.current_score + 1;
        const auto r = revise_target(kExampleFit, s);
        if (!(r.ratio > 0.0 && r.ratio <= 1.0)) continue;
        CHECK((r.revised_total == s.current_score || r.revised_total == s.current_score + 1));
    }
}

TEST_CASE("closed forms match adaptive quadrature on random tuples") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> ua(-0.01, 0.01), ub(-1.0, 2.0), uc(-5.0, 10.0);
    for (int k = 0; k < 1000; ++k) {
        const PolyFit f{ua(rng), ub(rng), uc(rng), 3, 0.0};
        const int N = 1 + static_cast<int>(rng() % 300);
        const int n = static_cast<int>(rng() % (N + 1));
        const int m = n + static_cast<int>(rng() % (N - n + 1));
        auto g = [&](double x) { return oracle::cubic(f.a, f.b, f.c, x); };
        auto absg = [&](double x) { return std::abs(g(x)); };
        const double scale = oracle::adaptive_simpson(absg, 0, N, 1e-9);
        const double full = oracle::adaptive_simpson(g, 0, N);
        const double part = oracle::adaptive_simpson(g, 0, n) + oracle::adaptive_simpson(g, m, N);
        CHECK(std::abs(area_full(f, N) - full) <= 1e-9 * scale);
        CHECK(std::abs(area_interrupted(f, n, m, N) - part) <= 1e-9 * scale);
    }
}

TEST_CASE("ratio never exceeds one when the lost stretch scores") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ua(0.0, 0.005), ub(0.0, 1.0), uc(0.0, 5.0);
    for (int k = 0; k < 300; ++k) {
        const PolyFit f{ua(rng), ub(rng), uc(rng) + 0.01, 3, 0.0};
        InterruptionScenario s;
        s.N = 300;
        s.n = static_cast<int>(rng() % 301);
        s.target_score = 200;
        double prev = 2.0;
        for (s.m = s.n; s.m <= s.N; s.m += 7) {
            const double r = resource_ratio(f, s);
            CHECK(r <= 1.0);
            if (s.m > s.n) CHECK(r < 1.0);
            CHECK(r <= prev);
            prev = r;
        }
    }
}

TEST_CASE("several interruptions subtract each lost stretch") {
    const std::vector<Interruption> lost{{60, 90}, {150, 180}, {240, 246}};
    double expected = quad_lost(kExampleFit, 0, 300);
    for (const auto& iv : lost) expected -= quad_lost(kExampleFit, iv.stop, iv.restart);
    CHECK(area_interrupted(kExampleFit, lost, 300) == doctest::Approx(expected).epsilon(1e-12));

    auto s = example_scenario();
    s.later = {{200, 230}};
    const double r2 = resource_ratio(kExampleFit, s);
    CHECK(r2 < resource_ratio(kExampleFit, example_scenario()));

    s.later = {{170, 200}};  // starts before the first restart
    CHECK_THROWS_AS(s.validate(), Error);

    const Interruption single{120, 180};
    CHECK(area_interrupted(kExampleFit, std::span<const Interruption>(&single, 1), 300) ==
          area_interrupted(kExampleFit, 120, 180, 300));
}
