#pragma once

#include <span>
#include <string>
#include <vector>

#include "rainrule/run_curves.hpp"

namespace rainrule {

// One stoppage: play halts after ball `stop` and resumes at absolute ball
// index `restart`, so the balls stop+1 .. restart are lost.
struct Interruption {
    int stop = 0;
    int restart = 0;
};

struct InterruptionScenario {
    int n = 0;  // balls bowled before the stoppage
    int m = 0;  // ball index at restart
    int N = 0;  // scheduled balls
    int target_score = 1;
    int current_score = 0;
    int wickets_at_stoppage = 0;
    // Further stoppages after (n, m), ordered and non-overlapping.
    std::vector<Interruption> later;

    // Every stoppage interval, the primary (n, m) first.
    std::vector<Interruption> intervals() const;
    // Throws Error(invalid_scenario) naming the offending field.
    void validate() const;
};

struct RevisedTarget {
    double ratio = 1.0;
    double runs_remaining = 0.0;  // ratio * (target_score - current_score)
    int revised_total = 0;        // floor(current_score + runs_remaining)

    // Cricket convention: the chasing side must pass the par total.
    int to_win() const noexcept { return revised_total + 1; }
};

// Integral of the fitted curve over [0, N]: N^2 (N (3aN + 4b) + 6c) / 12.
double area_full(const PolyFit& fit, int N);

// Integral over [0, n] plus [m, N]:
// [3a(n^4 + N^4 - m^4) + 4b(n^3 + N^3 - m^3) + 6c(n^2 + N^2 - m^2)] / 12.
double area_interrupted(const PolyFit& fit, int n, int m, int N);

// Integral over [0, N] minus every lost interval. Intervals must satisfy
// 0 <= stop_1 <= restart_1 <= stop_2 <= ... <= N.
double area_interrupted(const PolyFit& fit, std::span<const Interruption> lost, int N);

double resource_ratio(const PolyFit& fit, const InterruptionScenario& scenario);

RevisedTarget revise_target(const PolyFit& fit, const InterruptionScenario& scenario);

// Output JSON `{ratio, runs_remaining, revised_total, to_win}`.
std::string revised_target_json(const RevisedTarget& revised);

}  // namespace rainrule
