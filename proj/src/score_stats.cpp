#include "rainrule/score_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "rainrule/detail/levenberg_marquardt.hpp"
#include "rainrule/error.hpp"

namespace rainrule {

std::size_t Histogram::nonempty_bins() const {
    return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](long long c) { return c > 0; }));
}

double NormalFit::operator()(double x) const {
    const double z = (x - xi) / sigma;
    return amplitude / (std::sqrt(2.0 * std::numbers::pi) * sigma) * std::exp(-0.5 * z * z);
}

std::vector<int> totals(std::span<const MatchRecord> corpus, MatchFormat format, int innings_index) {
    std::vector<int> out;
    for (const auto& m : corpus) {
        if (m.format != format) continue;
        const InningsRecord* inn = m.find_innings(innings_index);
        if (inn == nullptr) continue;
        int total = 0;
        for (const auto& d : inn->deliveries) total += d.total_runs();
        out.push_back(total);
    }
    if (out.empty())
        throw Error(Errc::empty_selection, fmt::format("no {} innings {} in corpus", format_name(format), innings_index));
    return out;
}

Histogram build_histogram(std::span<const int> values, double bin_width) {
    if (values.empty()) throw Error(Errc::empty_selection, "cannot build a histogram from no values");
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) throw std::invalid_argument("bin_width must be positive");

    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double lowest = std::floor(*lo / bin_width) * bin_width;
    const auto nbins = static_cast<std::size_t>(std::floor((*hi - lowest) / bin_width)) + 1;

    Histogram h;
    h.bin_width = bin_width;
    h.n_samples = static_cast<long long>(values.size());
    h.bin_lower_edges.resize(nbins);
    for (std::size_t i = 0; i < nbins; ++i) h.bin_lower_edges[i] = lowest + static_cast<double>(i) * bin_width;
    h.counts.assign(nbins, 0);

    for (int v : values) {
        auto idx = static_cast<std::ptrdiff_t>(std::floor((v - lowest) / bin_width));
        idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(nbins) - 1);
        // Division rounding can land a value one bin off its [edge, edge + width) interval.
        if (idx > 0 && v < h.bin_lower_edges[idx]) --idx;
        if (idx + 1 < static_cast<std::ptrdiff_t>(nbins) && v >= h.bin_lower_edges[idx + 1]) ++idx;
        ++h.counts[static_cast<std::size_t>(idx)];
    }
    return h;
}

NormalFit fit_normal(const Histogram& hist) {
    std::vector<double> centers(hist.counts.size()), heights(hist.counts.size());
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        centers[i] = hist.bin_center(i);
        heights[i] = static_cast<double>(hist.counts[i]);
    }
    return fit_normal(centers, heights, hist.bin_width);
}

NormalFit fit_normal(std::span<const double> bin_centers, std::span<const double> heights, double bin_width) {
    if (bin_centers.size() != heights.size()) throw std::invalid_argument("bin centres and heights differ in length");
    const auto nonempty = std::count_if(heights.begin(), heights.end(), [](double h) { return h > 0.0; });
    if (nonempty < 4)
        throw Error(Errc::insufficient_data,
                    fmt::format("normal fit needs at least 4 nonempty bins, got {}", nonempty));

    const auto nbins = static_cast<Eigen::Index>(heights.size());
    Eigen::VectorXd x(nbins), y(nbins);
    double n = 0.0, sum = 0.0;
    for (Eigen::Index i = 0; i < nbins; ++i) {
        x(i) = bin_centers[static_cast<std::size_t>(i)];
        y(i) = heights[static_cast<std::size_t>(i)];
        n += y(i);
        sum += y(i) * x(i);
    }
    const double mean = sum / n;
    double var = 0.0;
    for (Eigen::Index i = 0; i < nbins; ++i) var += y(i) * (x(i) - mean) * (x(i) - mean);
    var /= n;

    Eigen::Vector3d init(mean, std::sqrt(var), n * bin_width);
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);

    auto model = [&](const Eigen::Vector3d& p, Eigen::VectorXd& r, Eigen::Matrix<double, Eigen::Dynamic, 3>& J) {
        const double xi = p(0), sigma = p(1), amp = p(2);
        if (!(sigma > 1e-12) || !std::isfinite(sigma) || !std::isfinite(xi) || !std::isfinite(amp)) return false;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double z = (x(i) - xi) / sigma;
            const double shape = norm / sigma * std::exp(-0.5 * z * z);
            const double f = amp * shape;
            r(i) = y(i) - f;
            J(i, 0) = f * z / sigma;
            J(i, 1) = f * (z * z - 1.0) / sigma;
            J(i, 2) = shape;
        }
        return true;
    };

    const auto res = detail::levenberg_marquardt<3>(model, init, nbins);
    NormalFit fit{res.params(0), res.params(1), res.params(2), res.rss, res.iterations};
    if (!(fit.sigma >= 1e-9)) throw Error(Errc::degenerate_fit, "normal fit collapsed: sigma below 1e-9");
    if (!(fit.amplitude > 0.0)) throw Error(Errc::degenerate_fit, "normal fit produced a non-positive amplitude");
    return fit;
}

std::string histogram_csv(const Histogram& hist, const NormalFit& fit) {
    std::string out = "bin_center,count,fitted_value\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        const double c = hist.bin_center(i);
        out += fmt::format("{},{},{}\n", c, hist.counts[i], fit(c));
    }
    return out;
}

std::string normal_fit_json(const NormalFit& fit, const Histogram& hist) {
    nlohmann::ordered_json j;
    j["xi"] = fit.xi;
    j["sigma"] = fit.sigma;
    j["amplitude"] = fit.amplitude;
    j["rss"] = fit.rss;
    j["n_samples"] = hist.n_samples;
    j["bin_width"] = hist.bin_width;
    return j.dump(2) + "\n";
}

}  // namespace rainrule
