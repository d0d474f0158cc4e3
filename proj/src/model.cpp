#include "mutsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mutsim/error.hpp"

namespace mutsim {

namespace {

void require(bool ok, const char* field, const char* what) {
    if (!ok) {
        throw Error(ErrorCode::ConstraintViolation, std::string(field) + " must be " + what, field, 0);
    }
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }
bool finite_nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }

struct Field {
    const char* name;
    double value;
};

// Newton budget, and the much larger one for the linearly convergent branch.
constexpr int kNewtonBudget = 200;
constexpr int kFixedPointBudget = 100000;
constexpr int kMaxHalvings = 60;

std::array<double, 2> growth_rates(const State& s, const ModelParams& p) {
    return {p.r1 - p.b1 * s.x / (p.k1 + s.y) - p.eps1 * s.x,
            p.r2 - p.b2 * s.y / (p.k2 + s.x) - p.eps2 * s.y};
}

// Stop refining once a step no longer moves the point beyond rounding level.
bool settled(const State& a, const State& b) {
    const double step = std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
    return step <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a.x), std::abs(a.y));
}

// Iterates past the residual test until the point settles: the residual
// alone can sit well below tol while the point is still ~tol/eps away.
bool solve_newton(const ModelParams& p, State start, double tol, State& out, int& iterations) {
    State s = start;
    double res = equilibrium_residual(s, p);
    for (iterations = 0; iterations < kNewtonBudget; ++iterations) {
        if (res == 0.0) break;
        const auto f = growth_rates(s, p);
        const double a11 = -p.b1 / (p.k1 + s.y) - p.eps1;
        const double a12 = p.b1 * s.x / ((p.k1 + s.y) * (p.k1 + s.y));
        const double a21 = p.b2 * s.y / ((p.k2 + s.x) * (p.k2 + s.x));
        const double a22 = -p.b2 / (p.k2 + s.x) - p.eps2;
        const double det = a11 * a22 - a12 * a21;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double dx = -(a22 * f[0] - a12 * f[1]) / det;
        const double dy = -(-a21 * f[0] + a11 * f[1]) / det;

        if (res <= tol) {
            // Inside the quadratic basin: take the full step, no line search.
            const State next{s.x + dx, s.y + dy};
            const bool done = settled(s, next);
            s = next;
            res = equilibrium_residual(s, p);
            if (done) break;
            continue;
        }
        double scale = 1.0;
        bool accepted = false;
        for (int h = 0; h < kMaxHalvings; ++h, scale *= 0.5) {
            const State trial{s.x + scale * dx, s.y + scale * dy};
            if (!(trial.x > 0.0 && trial.y > 0.0)) continue;
            const double trial_res = equilibrium_residual(trial, p);
            if (trial_res < res) {
                s = trial;
                res = trial_res;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    out = s;
    return res <= tol;
}

bool solve_fixed_point(const ModelParams& p, State start, double tol, State& out, int& iterations) {
    State s = start;
    for (iterations = 0; iterations < kFixedPointBudget; ++iterations) {
        State next;
        next.x = p.r1 / (p.eps1 + p.b1 / (p.k1 + s.y));
        next.y = p.r2 / (p.eps2 + p.b2 / (p.k2 + next.x));
        const bool done = settled(s, next);
        s = next;
        if (done) break;
    }
    out = s;
    return equilibrium_residual(s, p) <= tol;
}

}  // namespace

SpeciesCoeffs species(const ModelParams& p, int which) {
    if (which == 1) return {p.r1, p.b1, p.k1, p.eps1, p.alpha1, p.x0};
    if (which == 2) return {p.r2, p.b2, p.k2, p.eps2, p.alpha2, p.y0};
    throw Error(ErrorCode::InvalidArgument, "species index must be 1 or 2");
}

void validate_strict(const ModelParams& p) {
    for (const Field& f : {Field{"r1", p.r1}, Field{"r2", p.r2}, Field{"b1", p.b1}, Field{"b2", p.b2},
                           Field{"k1", p.k1}, Field{"k2", p.k2}, Field{"eps1", p.eps1},
                           Field{"eps2", p.eps2}}) {
        require(finite_positive(f.value), f.name, "finite and > 0");
    }
    require(finite_nonnegative(p.alpha1), "alpha1", "finite and >= 0");
    require(finite_nonnegative(p.alpha2), "alpha2", "finite and >= 0");
    require(finite_positive(p.x0), "x0", "finite and > 0");
    require(finite_positive(p.y0), "y0", "finite and > 0");
}

void validate_relaxed(const ModelParams& p) {
    require(std::isfinite(p.r1), "r1", "finite");
    require(std::isfinite(p.r2), "r2", "finite");
    for (const Field& f : {Field{"b1", p.b1}, Field{"b2", p.b2}, Field{"eps1", p.eps1},
                           Field{"eps2", p.eps2}, Field{"alpha1", p.alpha1}, Field{"alpha2", p.alpha2}}) {
        require(finite_nonnegative(f.value), f.name, "finite and >= 0");
    }
    require(finite_positive(p.k1), "k1", "finite and > 0");
    require(finite_positive(p.k2), "k2", "finite and > 0");
    require(finite_positive(p.x0), "x0", "finite and > 0");
    require(finite_positive(p.y0), "y0", "finite and > 0");
}

ModelParams preset_params(double alpha1, double alpha2) {
    ModelParams p;
    p.r1 = 1.2;
    p.r2 = 1.0;
    p.eps1 = 0.8;
    p.eps2 = 0.7;
    p.b1 = 0.7;
    p.b2 = 0.9;
    p.k1 = 2.0;
    p.k2 = 2.0;
    p.alpha1 = alpha1;
    p.alpha2 = alpha2;
    p.x0 = 0.5;
    p.y0 = 0.5;
    return p;
}

RatePair drift(const State& s, const ModelParams& p) {
    if (std::isnan(s.x) || std::isnan(s.y)) {
        throw Error(ErrorCode::InvalidArgument, "drift: NaN state");
    }
    return {s.x * (p.r1 - p.b1 * s.x / (p.k1 + s.y) - p.eps1 * s.x),
            s.y * (p.r2 - p.b2 * s.y / (p.k2 + s.x) - p.eps2 * s.y)};
}

RatePair diffusion(const State& s, const ModelParams& p) {
    if (std::isnan(s.x) || std::isnan(s.y)) {
        throw Error(ErrorCode::InvalidArgument, "diffusion: NaN state");
    }
    return {p.alpha1 * s.x, p.alpha2 * s.y};
}

double equilibrium_residual(const State& s, const ModelParams& p) {
    const auto f = growth_rates(s, p);
    return std::max(std::abs(f[0]), std::abs(f[1]));
}

EquilibriumSet equilibria(const ModelParams& p, double tol) {
    validate_relaxed(p);
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "equilibria: tol must be > 0");
    if (!(p.eps1 > 0.0 && p.eps2 > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "equilibria: eps1 and eps2 must be > 0");
    }

    EquilibriumSet out;
    out.e1 = {0.0, 0.0};
    out.e2 = {p.r1 / (p.eps1 + p.b1 / p.k1), 0.0};
    out.e3 = {0.0, p.r2 / (p.eps2 + p.b2 / p.k2)};

    // Both maps are increasing, so iterating from the boundary values climbs
    // monotonically toward the interior point.
    const State start{out.e2.x, out.e3.y};
    out.newton_converged = solve_newton(p, start, tol, out.newton, out.newton_iterations);
    out.fixed_point_converged = solve_fixed_point(p, start, tol, out.fixed_point, out.fixed_point_iterations);

    if (!out.newton_converged && !out.fixed_point_converged) {
        throw Error(ErrorCode::NoConvergence, "equilibria: neither Newton nor fixed-point iteration reached tol");
    }
    if (out.newton_converged && out.fixed_point_converged) {
        const double gap = std::max(std::abs(out.newton.x - out.fixed_point.x),
                                    std::abs(out.newton.y - out.fixed_point.y));
        if (gap > 10.0 * tol) {
            throw Error(ErrorCode::NoConvergence, "equilibria: Newton and fixed-point branches disagree");
        }
    }
    out.e_star = out.newton_converged ? out.newton : out.fixed_point;
    out.residual = equilibrium_residual(out.e_star, p);
    return out;
}

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::Permanent: return "Permanent";
        case Regime::XExtinctYPersistent: return "XExtinctYPersistent";
        case Regime::YExtinctXPersistent: return "YExtinctXPersistent";
        case Regime::BothExtinct: return "BothExtinct";
        case Regime::Boundary: return "Boundary";
    }
    return "Boundary";
}

RegimeClassification classify(const ModelParams& p) {
    RegimeClassification c;
    c.margins = {p.r1 - p.alpha1 * p.alpha1 / 2.0, p.r2 - p.alpha2 * p.alpha2 / 2.0};
    const double m1 = c.margins[0];
    const double m2 = c.margins[1];
    if (m1 == 0.0 || m2 == 0.0) {
        c.tag = Regime::Boundary;
    } else if (m1 > 0.0 && m2 > 0.0) {
        c.tag = Regime::Permanent;
    } else if (m1 < 0.0 && m2 < 0.0) {
        c.tag = Regime::BothExtinct;
    } else if (m1 < 0.0) {
        c.tag = Regime::XExtinctYPersistent;
    } else {
        c.tag = Regime::YExtinctXPersistent;
    }
    return c;
}

double moment_bound(const ModelParams& p, double k, int which) {
    if (!(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "moment_bound: k must be > 0");
    const SpeciesCoeffs c = species(p, which);
    const double base = (1.0 + k * c.r + k * (k - 1.0) / 2.0 * c.alpha * c.alpha) / (k + 1.0);
    return std::pow(base, k + 1.0) / std::pow(c.eps, k);
}

double norm_moment_bound(const ModelParams& p, double k) {
    return std::pow(2.0, k / 2.0) * (moment_bound(p, k, 1) + moment_bound(p, k, 2));
}

PersistenceLimits persistence_limits(const ModelParams& p) {
    PersistenceLimits out;
    for (int i = 1; i <= 2; ++i) {
        const SpeciesCoeffs c = species(p, i);
        const double margin = c.r - c.alpha * c.alpha / 2.0;
        out.lower_bound[i - 1] = c.k * margin / (c.b + c.eps * c.k);
        out.solo_limit[i - 1] = margin / (c.b / c.k + c.eps);
    }
    return out;
}

}  // namespace mutsim
