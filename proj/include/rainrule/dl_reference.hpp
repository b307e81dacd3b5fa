#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rainrule/ball_log.hpp"
#include "rainrule/run_curves.hpp"

namespace rainrule {

// Z(u) = z0 (1 - exp(-decay u)): expected further runs with u overs left
// and w wickets down.
struct DLCurve {
    int w = 0;
    double z0 = 1.0;
    double decay = 1.0;  // per over
    double rss = 0.0;

    double operator()(double overs_remaining) const;
};

struct DLObservation {
    int overs_remaining = 0;
    double mean_runs = 0.0;  // mean runs from this point to the end of the innings
    int n_contributing = 1;
};

// Observations per wickets-down state 0..9, sampled at completed-over
// boundaries of first innings from unshortened matches.
std::array<std::vector<DLObservation>, 10> dl_observations(std::span<const MatchRecord> corpus, MatchFormat format,
                                                           int min_support = kDefaultMinSupport);

// Weighted least squares (weights n_contributing). Needs three observations.
DLCurve fit_dl_curve(int w, std::span<const DLObservation> observations);

struct DLFamily {
    MatchFormat format = MatchFormat::odi;
    std::vector<DLCurve> curves;  // ascending w, possibly with gaps
    std::vector<std::string> diagnostics;
    bool isotonic_adjusted = false;  // z0 pooled to be non-increasing in w
};

DLFamily fit_dl_family(std::span<const MatchRecord> corpus, MatchFormat format, int min_support = kDefaultMinSupport);

// Percentage of the full-innings resource (max_overs left, no wickets down)
// remaining with u overs left and w wickets down.
class ResourceTable {
public:
    ResourceTable() = default;
    explicit ResourceTable(int max_overs);

    int max_overs() const noexcept { return max_overs_; }
    double percentage(int overs_remaining, int wickets_lost) const;
    void set(int overs_remaining, int wickets_lost, double pct);

    // True when crossing curves forced a cell down to the value of a
    // state with fewer wickets lost.
    bool crossing_adjusted = false;

private:
    int max_overs_ = 0;
    std::vector<std::array<double, 11>> rows_;  // indexed by overs remaining
};

ResourceTable resource_table(std::span<const DLCurve> family, int max_overs);

// Rows u = max_overs..0, columns `overs_remaining,w0..w10`, one decimal.
std::string resource_table_csv(const ResourceTable& table);
ResourceTable parse_resource_table_csv(std::string_view text);

std::string dl_family_json(const DLFamily& family);

}  // namespace rainrule
