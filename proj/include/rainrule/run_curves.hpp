#pragma once

#include <span>
#include <string>
#include <vector>

#include "rainrule/ball_log.hpp"

namespace rainrule {

struct CurvePoint {
    int ball = 1;
    double mean_score = 0.0;
    int n_contributing = 1;
};

// Mean cumulative score at each legal ball over innings that have exactly
// `wickets` down at that ball.
struct WicketCurve {
    int wickets = 0;
    MatchFormat format = MatchFormat::odi;
    int innings_index = 1;
    std::vector<CurvePoint> points;  // sorted by ball, unique
};

// f(x) = a x^3 + b x^2 + c x, in raw legal-ball units. There is no constant
// term: a curve of cumulative runs starts at zero.
struct PolyFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    int degree = 3;
    double rss = 0.0;  // minimised (weighted) residual sum of squares

    double operator()(double x) const noexcept { return ((a * x + b) * x + c) * x; }
};

inline constexpr int kDefaultMinSupport = 10;

// Innings from shortened matches are skipped. Balls with fewer than
// `min_support` contributing innings are omitted.
WicketCurve wicket_curve(std::span<const MatchRecord> corpus, MatchFormat format, int innings_index, int wickets,
                         int min_support = kDefaultMinSupport);

// Zero-intercept least squares over {x^3, x^2, x} (degree 3) or {x^2, x}
// (degree 2). Weighted fits use n_contributing as the point weight.
PolyFit fit_poly(const WicketCurve& curve, int degree, bool weighted = true);

// CSV `ball,mean_score,n_contributing,fitted_value`.
std::string curve_csv(const WicketCurve& curve, const PolyFit& fit);
// JSON `{format, innings, wickets, degree, a, b, c, rss}`.
std::string poly_fit_json(const WicketCurve& curve, const PolyFit& fit);

}  // namespace rainrule
