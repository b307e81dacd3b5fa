#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rainrule/dl_reference.hpp"
#include "rainrule/error.hpp"

using namespace rainrule;

namespace {

std::vector<DLObservation> synthetic(double z0, double decay, int max_overs) {
    std::vector<DLObservation> obs;
    for (int u = 1; u <= max_overs; ++u) obs.push_back({u, oracle::dl_resource(z0, decay, u), 20 + u % 9});
    return obs;
}

// A family with the familiar shape: fewer wickets lost means more to come.
std::vector<DLCurve> textbook_family() {
    std::vector<DLCurve> fam;
    // Each wicket lowers both the asymptote and the initial slope z0 * decay,
    // so no two curves cross.
    for (int w = 0; w < 10; ++w) fam.push_back({w, 280.0 * std::pow(0.86, w), 0.035 + 0.002 * w, 0.0});
    return fam;
}

// Runs per ball are `runs_per_ball`, stepped up by `acceleration` every 15
// overs when it is nonzero.
MatchRecord simple_odi(const std::string& id, int runs_per_ball, int wicket_ball, bool shortened = false,
                       int acceleration = 0) {
    MatchRecord m;
    m.match_id = id;
    m.format = MatchFormat::odi;
    m.shortened = shortened;
    InningsRecord inn;
    inn.innings_index = 1;
    for (int i = 0; i < 300; ++i) {
        DeliveryEvent d;
        d.over = i / 6;
        d.ball_in_over = i % 6 + 1;
        d.batter_runs = runs_per_ball + acceleration * (i / 90);
        d.wicket = i + 1 == wicket_ball;
        inn.deliveries.push_back(d);
    }
    m.innings.push_back(inn);
    return m;
}

}  // namespace

TEST_CASE("fit_dl_curve recovers a planted exponential") {
    for (int max_overs : {50, 20}) {
        const auto fit = fit_dl_curve(3, synthetic(250.0, 0.04, max_overs));
        CHECK(fit.w == 3);
        CHECK(std::abs(fit.z0 - 250.0) <= 1e-4 * 250.0);
        CHECK(std::abs(fit.decay - 0.04) <= 1e-4 * 0.04);
        CHECK(fit(0.0) == 0.0);
    }
}

TEST_CASE("fit_dl_curve needs three observations") {
    const auto obs = synthetic(100.0, 0.1, 2);
    try {
        fit_dl_curve(0, obs);
        FAIL("expected insufficient_data");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::insufficient_data);
    }
}

TEST_CASE("DLCurve is increasing and concave") {
    const DLCurve c{0, 250.0, 0.04, 0.0};
    double prev = c(0.0), prev_slope = INFINITY;
    for (int i = 1; i <= 500; ++i) {
        const double u = 50.0 * i / 500.0;
        const double v = c(u);
        const double slope = v - prev;
        CHECK(slope > 0.0);
        CHECK(slope <= prev_slope * (1 + 1e-12));
        CHECK(v == doctest::Approx(oracle::dl_resource(250.0, 0.04, u)).epsilon(1e-14));
        prev = v;
        prev_slope = slope;
    }
}

TEST_CASE("resource_table corners and monotonicity") {
    const auto table = resource_table(textbook_family(), 50);
    CHECK(table.percentage(50, 0) == 100.0);
    for (int w = 0; w <= 10; ++w) CHECK(table.percentage(0, w) == 0.0);
    for (int u = 0; u <= 50; ++u) CHECK(table.percentage(u, 10) == 0.0);
    for (int u = 0; u <= 50; ++u)
        for (int w = 0; w <= 10; ++w) {
            if (u > 0) CHECK(table.percentage(u, w) >= table.percentage(u - 1, w));
            if (w > 0) CHECK(table.percentage(u, w) <= table.percentage(u, w - 1));
        }
    CHECK_FALSE(table.crossing_adjusted);
    // Interior cell against the closed form.
    const auto fam = textbook_family();
    CHECK(table.percentage(25, 4) == doctest::Approx(100.0 * oracle::dl_resource(fam[4].z0, fam[4].decay, 25) /
                                                     oracle::dl_resource(fam[0].z0, fam[0].decay, 50)));
    CHECK_THROWS_AS(table.percentage(51, 0), std::out_of_range);
}

TEST_CASE("resource_table handles crossing curves and gaps") {
    std::vector<DLCurve> fam{{0, 200.0, 0.05, 0.0}, {1, 260.0, 0.02, 0.0}, {3, 100.0, 0.08, 0.0}};
    const auto table = resource_table(fam, 50);
    CHECK(table.crossing_adjusted);
    for (int u = 0; u <= 50; ++u) {
        CHECK(table.percentage(u, 1) <= table.percentage(u, 0));
        CHECK(table.percentage(u, 2) == table.percentage(u, 1));
        for (int w = 4; w < 10; ++w) CHECK(table.percentage(u, w) == table.percentage(u, 3));
    }
}

TEST_CASE("resource_table needs the no-wickets curve") {
    const std::vector<DLCurve> fam{{1, 200.0, 0.05, 0.0}};
    try {
        resource_table(fam, 50);
        FAIL("expected incomplete_family");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::incomplete_family);
    }
}

TEST_CASE("resource table csv round trip") {
    const auto table = resource_table(textbook_family(), 20);
    const auto csv = resource_table_csv(table);
    CHECK(csv.rfind("overs_remaining,w0,w1,w2,w3,w4,w5,w6,w7,w8,w9,w10\n20,100.0,", 0) == 0);
    const auto back = parse_resource_table_csv(csv);
    CHECK(back.max_overs() == 20);
    for (int u = 0; u <= 20; ++u)
        for (int w = 0; w <= 10; ++w) CHECK(std::abs(back.percentage(u, w) - table.percentage(u, w)) <= 0.05 + 1e-12);
    CHECK(resource_table_csv(back) == csv);
    CHECK_THROWS_AS(parse_resource_table_csv("u,w0\n1,2\n"), ParseError);
}

TEST_CASE("dl_observations by hand") {
    // Three identical 1-run-per-ball innings; one loses a wicket on ball 7.
    const std::vector<MatchRecord> corpus{simple_odi("a", 1, 0), simple_odi("b", 1, 0), simple_odi("c", 1, 7),
                                          simple_odi("s", 4, 0, true)};
    const auto obs = dl_observations(corpus, MatchFormat::odi, 1);
    // Start of the innings: all three at 0 down, 300 runs to come.
    REQUIRE(obs[0].front().overs_remaining == 1);
    const auto& top = obs[0].back();
    CHECK(top.overs_remaining == 50);
    CHECK(top.n_contributing == 3);
    CHECK(top.mean_runs == 300.0);
    // After one over, still all at 0 down; after two, match c is 1 down.
    CHECK(obs[0][48].overs_remaining == 49);
    CHECK(obs[0][48].n_contributing == 3);
    CHECK(obs[0][47].n_contributing == 2);
    CHECK(obs[1].size() == 48);
    CHECK(obs[1].back().overs_remaining == 48);
    CHECK(obs[1].back().mean_runs == 288.0);

    const auto strict = dl_observations(corpus, MatchFormat::odi, 3);
    CHECK(strict[1].empty());
    CHECK(strict[0].size() == 2);
}

TEST_CASE("fit_dl_family pools z0 when it rises with wickets") {
    std::vector<MatchRecord> corpus;
    // Late acceleration makes runs-to-come concave in overs left. The side
    // that loses a wicket early scores twice as fast as the one that never does.
    for (int k = 0; k < 12; ++k) corpus.push_back(simple_odi("a" + std::to_string(k), 1, 0, false, 1));
    for (int k = 0; k < 12; ++k) corpus.push_back(simple_odi("b" + std::to_string(k), 2, 6, false, 2));
    const auto fam = fit_dl_family(corpus, MatchFormat::odi, 10);
    REQUIRE(fam.curves.size() == 2);
    CHECK(fam.isotonic_adjusted);
    CHECK(fam.curves[0].z0 == fam.curves[1].z0);
    CHECK(fam.diagnostics.size() >= 8);
    const auto json = dl_family_json(fam);
    CHECK(json.find("\"isotonic_adjusted\": true") != std::string::npos);
    CHECK_THROWS_AS(fit_dl_family(std::vector<MatchRecord>{}, MatchFormat::odi), Error);
}

TEST_CASE("bundled ODI corpus yields a monotone table") {
    const auto corpus = load_corpus(std::filesystem::path(RAINRULE_SOURCE_DIR) / "data" / "fixtures", MatchFormat::odi);
    const auto fam = fit_dl_family(corpus.matches, MatchFormat::odi, 3);
    REQUIRE_FALSE(fam.curves.empty());
    CHECK(fam.curves.front().w == 0);
    const auto table = resource_table(fam.curves, 50);
    for (int u = 0; u <= 50; ++u)
        for (int w = 0; w <= 10; ++w) {
            if (u > 0) CHECK(table.percentage(u, w) >= table.percentage(u - 1, w));
            if (w > 0) CHECK(table.percentage(u, w) <= table.percentage(u, w - 1));
        }
}
