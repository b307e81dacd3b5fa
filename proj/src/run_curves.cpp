#include "rainrule/run_curves.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "rainrule/error.hpp"

namespace rainrule {

WicketCurve wicket_curve(std::span<const MatchRecord> corpus, MatchFormat format, int innings_index, int wickets,
                         int min_support) {
    if (wickets < 0 || wickets > 10) throw std::invalid_argument("wickets must lie in [0, 10]");
    if (innings_index != 1 && innings_index != 2) throw std::invalid_argument("innings index must be 1 or 2");
    if (min_support < 1) throw std::invalid_argument("min_support must be positive");

    const int balls = scheduled_balls(format);
    std::vector<long long> sum(static_cast<std::size_t>(balls) + 1, 0);
    std::vector<int> count(static_cast<std::size_t>(balls) + 1, 0);

    for (const auto& m : corpus) {
        if (m.format != format || m.shortened) continue;
        const InningsRecord* inn = m.find_innings(innings_index);
        if (inn == nullptr || inn->deliveries.empty()) continue;
        for (const auto& p : trajectory(*inn, format).points) {
            if (p.wickets_fallen != wickets) continue;
            sum[static_cast<std::size_t>(p.ball)] += p.cumulative_runs;
            ++count[static_cast<std::size_t>(p.ball)];
        }
    }

    WicketCurve curve{wickets, format, innings_index, {}};
    for (int x = 1; x <= balls; ++x) {
        const int n = count[static_cast<std::size_t>(x)];
        if (n < min_support) continue;
        curve.points.push_back({x, static_cast<double>(sum[static_cast<std::size_t>(x)]) / n, n});
    }
    if (curve.points.empty())
        throw Error(Errc::empty_curve, fmt::format("no ball of {} innings {} has {} innings with {} wickets down",
                                                   format_name(format), innings_index, min_support, wickets));
    return curve;
}

PolyFit fit_poly(const WicketCurve& curve, int degree, bool weighted) {
    if (degree != 2 && degree != 3) throw std::invalid_argument("degree must be 2 or 3");
    const auto n_points = static_cast<Eigen::Index>(curve.points.size());
    if (n_points < degree + 1)
        throw Error(Errc::insufficient_data,
                    fmt::format("degree-{} fit needs {} points, curve has {}", degree, degree + 1, n_points));

    // Columns are t^k for t = ball / scheduled_balls, highest power first,
    // which keeps the Gram matrix well conditioned.
    const int cols = degree;
    const double scale = scheduled_balls(curve.format);
    Eigen::MatrixXd phi(n_points, cols);
    Eigen::VectorXd y(n_points), w(n_points);
    for (Eigen::Index i = 0; i < n_points; ++i) {
        const auto& p = curve.points[static_cast<std::size_t>(i)];
        const double t = p.ball / scale;
        for (int k = 0; k < cols; ++k) phi(i, k) = std::pow(t, cols - k);
        y(i) = p.mean_score;
        w(i) = weighted ? static_cast<double>(p.n_contributing) : 1.0;
    }

    const Eigen::MatrixXd gram = phi.transpose() * w.asDiagonal() * phi;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double max_ev = eig.eigenvalues().maxCoeff();
    if (!(max_ev > 0.0) || eig.eigenvalues().minCoeff() <= 1e-13 * max_ev)
        throw Error(Errc::singular_fit, "rank-deficient design: too few distinct ball values");

    const auto ldlt = gram.ldlt();
    Eigen::VectorXd theta = ldlt.solve(phi.transpose() * w.asDiagonal() * y);
    // Iterative refinement on the normal equations.
    for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd resid = y - phi * theta;
        theta += ldlt.solve(phi.transpose() * w.asDiagonal() * resid);
    }

    PolyFit fit;
    fit.degree = degree;
    if (degree == 3) {
        fit.a = theta(0) / (scale * scale * scale);
        fit.b = theta(1) / (scale * scale);
        fit.c = theta(2) / scale;
    } else {
        fit.b = theta(0) / (scale * scale);
        fit.c = theta(1) / scale;
    }
    for (const auto& p : curve.points) {
        const double r = p.mean_score - fit(p.ball);
        fit.rss += (weighted ? p.n_contributing : 1) * r * r;
    }
    return fit;
}

std::string curve_csv(const WicketCurve& curve, const PolyFit& fit) {
    std::string out = "ball,mean_score,n_contributing,fitted_value\n";
    for (const auto& p : curve.points) out += fmt::format("{},{},{},{}\n", p.ball, p.mean_score, p.n_contributing, fit(p.ball));
    return out;
}

std::string poly_fit_json(const WicketCurve& curve, const PolyFit& fit) {
    nlohmann::ordered_json j;
    j["format"] = format_name(curve.format);
    j["innings"] = curve.innings_index;
    j["wickets"] = curve.wickets;
    j["degree"] = fit.degree;
    j["a"] = fit.a;
    j["b"] = fit.b;
    j["c"] = fit.c;
    j["rss"] = fit.rss;
    return j.dump(2) + "\n";
}

}  // namespace rainrule
