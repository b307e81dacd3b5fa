#pragma once

#include <span>
#include <string>
#include <vector>

#include "rainrule/ball_log.hpp"

namespace rainrule {

// Left-closed, right-open bins of uniform width.
struct Histogram {
    double bin_width = 1.0;
    std::vector<double> bin_lower_edges;
    std::vector<long long> counts;
    long long n_samples = 0;

    double bin_center(std::size_t i) const { return bin_lower_edges[i] + 0.5 * bin_width; }
    std::size_t nonempty_bins() const;
};

// Three-parameter normal curve A / (sqrt(2 pi) sigma) * exp(-(x - xi)^2 / (2 sigma^2)),
// with A in count units.
struct NormalFit {
    double xi = 0.0;
    double sigma = 1.0;
    double amplitude = 1.0;
    double rss = 0.0;
    int iterations = 0;

    double operator()(double x) const;
};

// Innings totals for one format and innings index, in corpus order.
std::vector<int> totals(std::span<const MatchRecord> corpus, MatchFormat format, int innings_index);

Histogram build_histogram(std::span<const int> values, double bin_width);

// Least-squares fit of the normal curve to bin counts at bin centres.
// Needs at least four nonempty bins.
NormalFit fit_normal(const Histogram& hist);

// Same fit over arbitrary bin heights (need not be integers). The amplitude
// starts at sum(heights) * bin_width.
NormalFit fit_normal(std::span<const double> bin_centers, std::span<const double> heights, double bin_width);

// Default bin widths: 20 runs for ODI, 10 for the twenty-over formats.
constexpr double default_bin_width(MatchFormat format) noexcept {
    return format == MatchFormat::odi ? 20.0 : 10.0;
}

// CSV `bin_center,count,fitted_value`.
std::string histogram_csv(const Histogram& hist, const NormalFit& fit);
// JSON `{xi, sigma, amplitude, rss, n_samples, bin_width}`.
std::string normal_fit_json(const NormalFit& fit, const Histogram& hist);

}  // namespace rainrule
