#include "rainrule/target_engine.hpp"

#include <cmath>
#include <cstdint>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "rainrule/error.hpp"

namespace rainrule {

namespace {

// N^4 must stay inside int64.
constexpr int kMaxBalls = 50000;

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::invalid_scenario, what); }

void check_intervals(std::span<const Interruption> lost, int N) {
    if (N <= 0) invalid(fmt::format("N: scheduled balls must be positive, got {}", N));
    if (N > kMaxBalls) invalid(fmt::format("N: {} exceeds the supported {} balls", N, kMaxBalls));
    int prev = 0;
    for (std::size_t i = 0; i < lost.size(); ++i) {
        const auto& iv = lost[i];
        const char* first = i == 0 ? "n" : "interruptions.stop";
        const char* second = i == 0 ? "m" : "interruptions.restart";
        if (iv.stop < prev) invalid(fmt::format("{}: {} precedes earlier play at ball {}", first, iv.stop, prev));
        if (iv.restart < iv.stop) invalid(fmt::format("{}: restart {} precedes stop {}", second, iv.restart, iv.stop));
        if (iv.restart > N) invalid(fmt::format("{}: restart {} beyond N = {}", second, iv.restart, N));
        prev = iv.restart;
    }
}

std::int64_t ipow(std::int64_t x, int k) {
    std::int64_t r = 1;
    while (k-- > 0) r *= x;
    return r;
}

}  // namespace

std::vector<Interruption> InterruptionScenario::intervals() const {
    std::vector<Interruption> out;
    out.reserve(later.size() + 1);
    out.push_back({n, m});
    out.insert(out.end(), later.begin(), later.end());
    return out;
}

void InterruptionScenario::validate() const {
    if (n < 0) invalid(fmt::format("n: must be non-negative, got {}", n));
    check_intervals(intervals(), N);
    if (target_score <= 0) invalid(fmt::format("target_score: must be positive, got {}", target_score));
    if (current_score < 0) invalid(fmt::format("current_score: must be non-negative, got {}", current_score));
    if (current_score >= target_score)
        invalid(fmt::format("current_score: {} already reaches target_score {}", current_score, target_score));
    if (wickets_at_stoppage < 0 || wickets_at_stoppage > 10)
        invalid(fmt::format("wickets: must lie in [0, 10], got {}", wickets_at_stoppage));
}

double area_full(const PolyFit& fit, int N) {
    const double x = N;
    return x * x * (x * (3.0 * fit.a * x + 4.0 * fit.b) + 6.0 * fit.c) / 12.0;
}

double area_interrupted(const PolyFit& fit, std::span<const Interruption> lost, int N) {
    if (!lost.empty() && lost.front().stop < 0) invalid(fmt::format("n: must be non-negative, got {}", lost.front().stop));
    check_intervals(lost, N);
    // Power sums are exact integers, so n^k + N^k - m^k collapses to N^k
    // exactly when m = n.
    std::int64_t s4 = ipow(N, 4), s3 = ipow(N, 3), s2 = ipow(N, 2);
    for (const auto& iv : lost) {
        s4 -= ipow(iv.restart, 4) - ipow(iv.stop, 4);
        s3 -= ipow(iv.restart, 3) - ipow(iv.stop, 3);
        s2 -= ipow(iv.restart, 2) - ipow(iv.stop, 2);
    }
    return (3.0 * fit.a * static_cast<double>(s4) + 4.0 * fit.b * static_cast<double>(s3) +
            6.0 * fit.c * static_cast<double>(s2)) /
           12.0;
}

double area_interrupted(const PolyFit& fit, int n, int m, int N) {
    const Interruption iv{n, m};
    return area_interrupted(fit, std::span<const Interruption>(&iv, 1), N);
}

double resource_ratio(const PolyFit& fit, const InterruptionScenario& scenario) {
    scenario.validate();
    // Same evaluation order as the numerator, so losing nothing gives exactly 1.
    const double full = area_interrupted(fit, std::span<const Interruption>{}, scenario.N);
    if (!(full > 0.0))
        throw Error(Errc::degenerate_curve,
                    fmt::format("fitted curve has non-positive area {} over {} balls", full, scenario.N));
    return area_interrupted(fit, scenario.intervals(), scenario.N) / full;
}

RevisedTarget revise_target(const PolyFit& fit, const InterruptionScenario& scenario) {
    RevisedTarget out;
    out.ratio = resource_ratio(fit, scenario);
    out.runs_remaining = out.ratio * (scenario.target_score - scenario.current_score);
    out.revised_total = static_cast<int>(std::floor(scenario.current_score + out.runs_remaining));
    return out;
}

std::string revised_target_json(const RevisedTarget& revised) {
    nlohmann::ordered_json j;
    j["ratio"] = revised.ratio;
    j["runs_remaining"] = revised.runs_remaining;
    j["revised_total"] = revised.revised_total;
    j["to_win"] = revised.to_win();
    return j.dump(2) + "\n";
}

}  // namespace rainrule
