#include "mutsim/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mutsim/error.hpp"

namespace mutsim {

namespace {

SpeciesSandwich measure(std::span<const double> z, std::span<const double> lo, std::span<const double> hi,
                        double rel_tol) {
    SpeciesSandwich s;
    s.upper_slack = std::numeric_limits<double>::infinity();
    s.lower_slack = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < z.size(); ++k) {
        const double up = (hi[k] - z[k]) / hi[k];
        const double down = (z[k] - lo[k]) / lo[k];
        s.upper_slack = std::min(s.upper_slack, up);
        s.lower_slack = std::min(s.lower_slack, down);
        const double raw = std::max({0.0, -up, -down});
        const double tolerant =
            std::max({0.0, (z[k] - hi[k] * (1.0 + rel_tol)) / hi[k], (lo[k] * (1.0 - rel_tol) - z[k]) / lo[k]});
        s.raw_violation = std::max(s.raw_violation, raw);
        if (tolerant > 0.0 && !s.first_violation) s.first_violation = k;
        s.max_violation = std::max(s.max_violation, tolerant);
    }
    return s;
}

}  // namespace

std::vector<double> stochastic_logistic_exact(double r, double damp, double alpha, double z0,
                                              std::span<const double> increments, double dt) {
    if (!(z0 > 0.0) || !(dt > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "stochastic_logistic_exact: z0 and dt must be > 0");
    }
    const double drift = r - 0.5 * alpha * alpha;
    const double inv_z0 = 1.0 / z0;
    std::vector<double> out(increments.size() + 1);
    out[0] = z0;

    double w = 0.0;
    double g_prev = 0.0;      // exponent of E at the previous grid point
    double running_max = 0.0;  // max exponent so far; E(0) = 1 so it starts at 0
    double scaled_integral = 0.0;  // int_0^t E ds / exp(running_max)
    for (std::size_t k = 0; k < increments.size(); ++k) {
        w += increments[k];
        const double g = drift * static_cast<double>(k + 1) * dt + alpha * w;
        const double new_max = std::max(running_max, g);
        scaled_integral = scaled_integral * std::exp(running_max - new_max) +
                          0.5 * dt * (std::exp(g_prev - new_max) + std::exp(g - new_max));
        running_max = new_max;
        g_prev = g;

        // Z = exp(g - M) / (exp(-M)/z0 + damp * S). Both denominator terms are
        // bounded because M >= 0 and exp(. - M) <= 1 inside S, and the
        // expression is monotone in damp under rounding.
        const double value = std::exp(g - running_max) / (std::exp(-running_max) * inv_z0 + damp * scaled_integral);
        if (!std::isfinite(value) || !(value > 0.0)) {
            throw Error(ErrorCode::Overflow,
                        "stochastic_logistic_exact: value left the representable range at step " + std::to_string(k));
        }
        out[k + 1] = value;
    }
    return out;
}

EnvelopeSet build_envelopes(const ModelParams& p, const BrownianPath& path) {
    validate_relaxed(p);
    EnvelopeSet env;
    env.dt = path.dt;
    env.times.resize(path.n_steps + 1);
    for (std::size_t k = 0; k <= path.n_steps; ++k) env.times[k] = static_cast<double>(k) * path.dt;
    env.lam_hi = stochastic_logistic_exact(p.r1, p.eps1, p.alpha1, p.x0, path.inc1, path.dt);
    env.lam_lo = stochastic_logistic_exact(p.r1, p.b1 / p.k1 + p.eps1, p.alpha1, p.x0, path.inc1, path.dt);
    env.th_hi = stochastic_logistic_exact(p.r2, p.eps2, p.alpha2, p.y0, path.inc2, path.dt);
    env.th_lo = stochastic_logistic_exact(p.r2, p.b2 / p.k2 + p.eps2, p.alpha2, p.y0, path.inc2, path.dt);
    return env;
}

SandwichReport check_sandwich(const Trajectory& traj, const EnvelopeSet& env, double rel_tol) {
    const std::size_t n = traj.xs.size();
    const bool same_grid = env.lam_hi.size() == n && env.lam_lo.size() == n && env.th_hi.size() == n &&
                           env.th_lo.size() == n && traj.ys.size() == n &&
                           std::abs(traj.dt - env.dt) <= 1e-15 * std::max(traj.dt, env.dt);
    if (!same_grid) {
        throw Error(ErrorCode::GridMismatch, "check_sandwich: trajectory and envelopes are on different grids");
    }
    SandwichReport report;
    report.rel_tol = rel_tol;
    report.x = measure(traj.xs, env.lam_lo, env.lam_hi, rel_tol);
    report.y = measure(traj.ys, env.th_lo, env.th_hi, rel_tol);
    report.pass = !report.x.first_violation && !report.y.first_violation;
    return report;
}

}  // namespace mutsim
