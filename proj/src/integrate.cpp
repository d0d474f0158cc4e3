#include "mutsim/integrate.hpp"

#include <cmath>
#include <string>

#include "mutsim/error.hpp"

namespace mutsim {

namespace {

void check_finite(const State& s, const char* scheme) {
    if (!std::isfinite(s.x) || !std::isfinite(s.y)) {
        throw Error(ErrorCode::Overflow, std::string(scheme) + ": state left the finite range");
    }
}

double clamp_positive(double value, double initial, int& clamps) {
    if (value > 0.0) return value;
    ++clamps;
    return kClampFraction * initial;
}

}  // namespace

std::string_view to_string(SchemeId s) {
    switch (s) {
        case SchemeId::EulerMaruyama: return "euler_maruyama";
        case SchemeId::Milstein: return "milstein";
        case SchemeId::LogEuler: return "log_euler";
    }
    return "milstein";
}

std::optional<SchemeId> parse_scheme(std::string_view name) {
    if (name == "euler_maruyama" || name == "euler") return SchemeId::EulerMaruyama;
    if (name == "milstein") return SchemeId::Milstein;
    if (name == "log_euler") return SchemeId::LogEuler;
    return std::nullopt;
}

StepResult step_milstein(const State& s, const ModelParams& p, const Increment& dw, double dt) {
    const RatePair f = drift(s, p);
    StepResult out;
    out.state.x = s.x + f.dx * dt + p.alpha1 * s.x * dw.dw1 + 0.5 * p.alpha1 * p.alpha1 * s.x * (dw.dw1 * dw.dw1 - dt);
    out.state.y = s.y + f.dy * dt + p.alpha2 * s.y * dw.dw2 + 0.5 * p.alpha2 * p.alpha2 * s.y * (dw.dw2 * dw.dw2 - dt);
    check_finite(out.state, "milstein");
    out.state.x = clamp_positive(out.state.x, p.x0, out.clamps);
    out.state.y = clamp_positive(out.state.y, p.y0, out.clamps);
    return out;
}

StepResult step_euler(const State& s, const ModelParams& p, const Increment& dw, double dt) {
    const RatePair f = drift(s, p);
    StepResult out;
    out.state.x = s.x + f.dx * dt + p.alpha1 * s.x * dw.dw1;
    out.state.y = s.y + f.dy * dt + p.alpha2 * s.y * dw.dw2;
    check_finite(out.state, "euler_maruyama");
    out.state.x = clamp_positive(out.state.x, p.x0, out.clamps);
    out.state.y = clamp_positive(out.state.y, p.y0, out.clamps);
    return out;
}

StepResult step_log_euler(const State& s, const ModelParams& p, const Increment& dw, double dt) {
    if (!(s.x > 0.0 && s.y > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "log_euler: state must be strictly positive");
    }
    const double du = (p.r1 - 0.5 * p.alpha1 * p.alpha1 - p.b1 * s.x / (p.k1 + s.y) - p.eps1 * s.x) * dt +
                      p.alpha1 * dw.dw1;
    const double dv = (p.r2 - 0.5 * p.alpha2 * p.alpha2 - p.b2 * s.y / (p.k2 + s.x) - p.eps2 * s.y) * dt +
                      p.alpha2 * dw.dw2;
    StepResult out;
    out.state.x = std::exp(std::log(s.x) + du);
    out.state.y = std::exp(std::log(s.y) + dv);
    check_finite(out.state, "log_euler");
    if (!(out.state.x > 0.0 && out.state.y > 0.0)) {
        throw Error(ErrorCode::Overflow, "log_euler: exponent underflowed to zero");
    }
    return out;
}

StepResult step(SchemeId scheme, const State& s, const ModelParams& p, const Increment& dw, double dt) {
    switch (scheme) {
        case SchemeId::EulerMaruyama: return step_euler(s, p, dw, dt);
        case SchemeId::Milstein: return step_milstein(s, p, dw, dt);
        case SchemeId::LogEuler: return step_log_euler(s, p, dw, dt);
    }
    return step_milstein(s, p, dw, dt);
}

Trajectory simulate(const ModelParams& p, SchemeId scheme, const BrownianPath& path) {
    validate_relaxed(p);
    if (path.inc1.size() != path.n_steps || path.inc2.size() != path.n_steps || !(path.dt > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "simulate: malformed Brownian path");
    }
    Trajectory traj;
    traj.dt = path.dt;
    traj.n_steps = path.n_steps;
    traj.scheme = scheme;
    traj.seed = path.seed;
    traj.stream_id = path.stream_id;
    traj.times.resize(path.n_steps + 1);
    traj.xs.resize(path.n_steps + 1);
    traj.ys.resize(path.n_steps + 1);
    traj.times[0] = 0.0;
    traj.xs[0] = p.x0;
    traj.ys[0] = p.y0;

    if (scheme == SchemeId::LogEuler) {
        // Carry (ln x, ln y) across steps instead of round-tripping exp/log.
        double u = std::log(p.x0);
        double v = std::log(p.y0);
        const double m1 = p.r1 - 0.5 * p.alpha1 * p.alpha1;
        const double m2 = p.r2 - 0.5 * p.alpha2 * p.alpha2;
        double x = p.x0, y = p.y0;
        for (std::size_t k = 0; k < path.n_steps; ++k) {
            u += (m1 - p.b1 * x / (p.k1 + y) - p.eps1 * x) * path.dt + p.alpha1 * path.inc1[k];
            v += (m2 - p.b2 * y / (p.k2 + x) - p.eps2 * y) * path.dt + p.alpha2 * path.inc2[k];
            x = std::exp(u);
            y = std::exp(v);
            if (!(x > 0.0 && y > 0.0 && std::isfinite(x) && std::isfinite(y))) {
                throw Error(ErrorCode::Overflow, "log_euler: exponent range exhausted at step " + std::to_string(k));
            }
            traj.times[k + 1] = static_cast<double>(k + 1) * path.dt;
            traj.xs[k + 1] = x;
            traj.ys[k + 1] = y;
        }
        return traj;
    }

    State s{p.x0, p.y0};
    for (std::size_t k = 0; k < path.n_steps; ++k) {
        StepResult r;
        try {
            r = step(scheme, s, p, Increment{path.inc1[k], path.inc2[k]}, path.dt);
        } catch (const Error& e) {
            throw Error(e.code(), std::string(e.what()) + " at step " + std::to_string(k));
        }
        s = r.state;
        traj.clamp_count += static_cast<std::size_t>(r.clamps);
        traj.times[k + 1] = static_cast<double>(k + 1) * path.dt;
        traj.xs[k + 1] = s.x;
        traj.ys[k + 1] = s.y;
    }
    return traj;
}

}  // namespace mutsim
