#pragma once

#include <cmath>
#include <cstddef>

#include <Eigen/Dense>

namespace rainrule::detail {

struct LmOptions {
    double lambda_start = 1e-3;
    double lambda_up = 10.0;
    double lambda_down = 10.0;
    double lambda_max = 1e20;
    double rel_rss_tol = 1e-10;
    int max_iterations = 500;
};

template <int P>
struct LmResult {
    Eigen::Matrix<double, P, 1> params;
    double rss = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Damped Gauss-Newton over a small fixed parameter vector.
//
// `model(params, residuals, jacobian)` fills residuals r = y - f(params)
// and the Jacobian of f, both already scaled by sqrt(weight), and returns
// false when `params` lies outside the model's domain (the step is then
// rejected like any other RSS increase). Damping scales the diagonal of
// J'J, so the solve is invariant to per-parameter units.
template <int P, class Model>
LmResult<P> levenberg_marquardt(Model&& model, Eigen::Matrix<double, P, 1> init, Eigen::Index n_obs,
                                const LmOptions& opts = {}) {
    using Vec = Eigen::Matrix<double, P, 1>;
    using Mat = Eigen::Matrix<double, P, P>;

    Eigen::VectorXd r(n_obs), r_trial(n_obs);
    Eigen::Matrix<double, Eigen::Dynamic, P> J(n_obs, P), J_trial(n_obs, P);

    LmResult<P> out;
    out.params = init;
    if (!model(out.params, r, J)) return out;
    out.rss = r.squaredNorm();

    double lambda = opts.lambda_start;
    while (out.iterations < opts.max_iterations) {
        ++out.iterations;
        if (out.rss == 0.0) {
            out.converged = true;
            break;
        }
        const Mat JtJ = J.transpose() * J;
        const Vec Jtr = J.transpose() * r;
        Mat A = JtJ;
        for (int i = 0; i < P; ++i) A(i, i) += lambda * (JtJ(i, i) > 0.0 ? JtJ(i, i) : 1.0);
        const Vec step = A.ldlt().solve(Jtr);
        const Vec trial = out.params + step;

        const bool ok = step.allFinite() && model(trial, r_trial, J_trial);
        const double rss_trial = ok ? r_trial.squaredNorm() : INFINITY;
        if (ok && rss_trial <= out.rss) {
            const double rel = (out.rss - rss_trial) / out.rss;
            out.params = trial;
            out.rss = rss_trial;
            r.swap(r_trial);
            J.swap(J_trial);
            lambda /= opts.lambda_down;
            if (rel < opts.rel_rss_tol) {
                out.converged = true;
                break;
            }
        } else {
            lambda *= opts.lambda_up;
            // No representable step improves the fit any further.
            if (lambda > opts.lambda_max) {
                out.converged = true;
                break;
            }
        }
    }
    return out;
}

}  // namespace rainrule::detail
