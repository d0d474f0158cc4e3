#include "mutsim/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mutsim/error.hpp"
#include "mutsim/noise.hpp"
#include "parallel.hpp"

namespace mutsim {

namespace {

double trapezoid(std::span<const double> z, std::size_t from, double dt) {
    double acc = 0.0;
    for (std::size_t k = from; k + 1 < z.size(); ++k) acc += 0.5 * (z[k] + z[k + 1]) * dt;
    return acc;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

}  // namespace

PathStats path_stats(const Trajectory& traj, double t_burn) {
    if (traj.n_steps == 0 || traj.xs.size() != traj.n_steps + 1) {
        throw Error(ErrorCode::InvalidArgument, "path_stats: trajectory needs at least one step");
    }
    const double t_end = static_cast<double>(traj.n_steps) * traj.dt;
    if (!(t_burn >= 0.0 && t_burn < t_end)) {
        throw Error(ErrorCode::InvalidArgument, "path_stats: t_burn must lie in [0, t_end)");
    }
    for (std::size_t k = 0; k <= traj.n_steps; ++k) {
        if (!(traj.xs[k] > 0.0 && traj.ys[k] > 0.0)) {
            throw Error(ErrorCode::InvalidArgument,
                        "path_stats: non-positive sample at index " + std::to_string(k));
        }
    }
    std::size_t from = static_cast<std::size_t>(std::llround(t_burn / traj.dt));
    from = std::min(from, traj.n_steps - 1);
    const double window = static_cast<double>(traj.n_steps - from) * traj.dt;

    PathStats s;
    s.t_end = t_end;
    s.t_burn = t_burn;
    s.time_avg_x = trapezoid(traj.xs, from, traj.dt) / window;
    s.time_avg_y = trapezoid(traj.ys, from, traj.dt) / window;
    s.x_end = traj.xs.back();
    s.y_end = traj.ys.back();
    s.log_growth_x = std::log(s.x_end) / t_end;
    s.log_growth_y = std::log(s.y_end) / t_end;
    s.min_norm = std::numeric_limits<double>::infinity();
    s.max_norm = 0.0;
    for (std::size_t k = from; k <= traj.n_steps; ++k) {
        const double norm = std::hypot(traj.xs[k], traj.ys[k]);
        s.min_norm = std::min(s.min_norm, norm);
        s.max_norm = std::max(s.max_norm, norm);
    }
    const std::size_t mid = traj.n_steps / 2;
    s.norm_mid = std::hypot(traj.xs[mid], traj.ys[mid]);
    s.norm_end = std::hypot(s.x_end, s.y_end);
    s.clamp_count = traj.clamp_count;
    return s;
}

bool empirically_extinct(double time_avg, double terminal) {
    return time_avg < kExtinctTimeAverage && terminal < kExtinctTerminal;
}

Regime empirical_outcome(const PathStats& s) {
    const bool x_gone = empirically_extinct(s.time_avg_x, s.x_end);
    const bool y_gone = empirically_extinct(s.time_avg_y, s.y_end);
    if (x_gone && y_gone) return Regime::BothExtinct;
    if (x_gone) return Regime::XExtinctYPersistent;
    if (y_gone) return Regime::YExtinctXPersistent;
    return Regime::Permanent;
}

MeanSe mean_se(std::span<const double> values) {
    MeanSe out;
    if (values.empty()) {
        out.mean = std::numeric_limits<double>::quiet_NaN();
        out.se = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    const double n = static_cast<double>(values.size());
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return out;
}

double empirical_quantile(std::vector<double> values, double level) {
    if (values.empty()) throw Error(ErrorCode::InvalidArgument, "empirical_quantile: no values");
    if (!(level >= 0.0 && level <= 1.0)) throw Error(ErrorCode::InvalidArgument, "empirical_quantile: level outside [0,1]");
    std::sort(values.begin(), values.end());
    const double h = level * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::size_t grid_steps(double t_end, double dt) {
    if (!(dt > 0.0) || !(t_end > 0.0) || !std::isfinite(t_end / dt)) {
        throw Error(ErrorCode::InvalidArgument, "grid: t_end and dt must be finite and > 0");
    }
    const double ratio = t_end / dt;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(ratio - n) > 1e-9 * ratio) {
        throw Error(ErrorCode::InvalidArgument, "grid: t_end must be a whole multiple of dt");
    }
    return static_cast<std::size_t>(n);
}

EnsembleSummary run_ensemble(const ModelParams& p, const EnsembleConfig& cfg) {
    validate_relaxed(p);
    if (cfg.n_replicates < 1) throw Error(ErrorCode::InvalidArgument, "run_ensemble: n_replicates must be >= 1");
    const std::size_t n_steps = grid_steps(cfg.t_end, cfg.dt);

    EnsembleSummary out;
    out.n_replicates = cfg.n_replicates;
    out.t_end = static_cast<double>(n_steps) * cfg.dt;
    out.replicates.resize(cfg.n_replicates);

    detail::parallel_for(cfg.n_replicates, cfg.workers, [&](std::size_t j) {
        ReplicateRecord& rec = out.replicates[j];
        rec.replicate = static_cast<std::uint32_t>(j);
        try {
            const BrownianPath path = generate_path(cfg.seed, static_cast<std::uint32_t>(j), cfg.dt, n_steps);
            const Trajectory traj = simulate(p, cfg.scheme, path);
            rec.stats = path_stats(traj, cfg.t_burn);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Overflow) throw;
            rec.failed = true;
            rec.failure = e.what();
        }
    });

    std::vector<double> tax, tay, lgx, lgy;
    for (const auto& rec : out.replicates) {
        if (rec.failed) {
            ++out.n_failed;
            continue;
        }
        tax.push_back(rec.stats.time_avg_x);
        tay.push_back(rec.stats.time_avg_y);
        lgx.push_back(rec.stats.log_growth_x);
        lgy.push_back(rec.stats.log_growth_y);
        out.norm_end.push_back(rec.stats.norm_end);
        out.norm_mid.push_back(rec.stats.norm_mid);
    }
    if (static_cast<double>(out.n_failed) > kMaxFailureFraction * static_cast<double>(cfg.n_replicates)) {
        throw Error(ErrorCode::ReplicateFailures, "run_ensemble: " + std::to_string(out.n_failed) + " of " +
                                                      std::to_string(cfg.n_replicates) + " replicates failed");
    }
    out.time_avg_x = mean_se(tax);
    out.time_avg_y = mean_se(tay);
    out.log_growth_x = mean_se(lgx);
    out.log_growth_y = mean_se(lgy);

    for (double k : cfg.k_list) {
        if (!(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "run_ensemble: moment orders must be > 0");
        std::vector<double> mx, my, mn;
        for (const auto& rec : out.replicates) {
            if (rec.failed) continue;
            mx.push_back(std::pow(rec.stats.x_end, k));
            my.push_back(std::pow(rec.stats.y_end, k));
            mn.push_back(std::pow(rec.stats.norm_end, k));
        }
        out.moments.push_back({k, mean_se(mx), mean_se(my), mean_se(mn)});
    }
    return out;
}

MomentCheck moment_check(const EnsembleSummary& summary, const ModelParams& p, double k) {
    const auto it = std::find_if(summary.moments.begin(), summary.moments.end(),
                                 [k](const MomentEstimate& m) { return m.k == k; });
    if (it == summary.moments.end()) {
        throw Error(ErrorCode::InvalidArgument, "moment_check: order " + std::to_string(k) + " not in summary");
    }
    auto passes = [](const MeanSe& m, double bound) {
        const double se_rel = m.mean > 0.0 ? m.se / m.mean : 0.0;
        return m.mean <= bound * (1.0 + 2.0 * se_rel);
    };
    MomentCheck c;
    c.k = k;
    c.x = it->x;
    c.y = it->y;
    c.norm = it->norm;
    c.bound_x = moment_bound(p, k, 1);
    c.bound_y = moment_bound(p, k, 2);
    c.bound_norm = norm_moment_bound(p, k);
    c.pass_x = passes(c.x, c.bound_x);
    c.pass_y = passes(c.y, c.bound_y);
    c.pass_norm = passes(c.norm, c.bound_norm);
    c.pass = c.pass_x && c.pass_y && c.pass_norm;
    return c;
}

PermanenceCheck permanence_check(const EnsembleSummary& summary, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "permanence_check: epsilon must lie in (0, 1)");
    }
    const double needed = kPermanenceSamplesPerTail / epsilon;
    if (static_cast<double>(summary.norm_end.size()) < needed) {
        throw Error(ErrorCode::InvalidArgument, "permanence_check: need at least " +
                                                    std::to_string(static_cast<long>(std::ceil(needed))) +
                                                    " successful replicates for this epsilon");
    }
    auto stable = [](double at_end, double at_mid) {
        return std::abs(at_end - at_mid) <= kQuantileStability * at_end;
    };
    PermanenceCheck c;
    c.epsilon = epsilon;
    c.beta1 = empirical_quantile(summary.norm_end, epsilon);
    c.beta2 = empirical_quantile(summary.norm_end, 1.0 - epsilon);
    c.beta1_mid = empirical_quantile(summary.norm_mid, epsilon);
    c.beta2_mid = empirical_quantile(summary.norm_mid, 1.0 - epsilon);
    c.beta1_stable = stable(c.beta1, c.beta1_mid);
    c.beta2_stable = stable(c.beta2, c.beta2_mid);
    c.pass = c.beta1 > 0.0 && c.beta1_stable && c.beta2_stable;
    return c;
}

RegimeConcordance regime_concordance(const EnsembleSummary& summary, const ModelParams& p) {
    RegimeConcordance c;
    c.predicted = classify(p).tag;
    for (const auto& rec : summary.replicates) {
        if (rec.failed) continue;
        ++c.counted;
        if (empirical_outcome(rec.stats) == c.predicted) ++c.matches;
    }
    if (c.predicted == Regime::Boundary || c.counted == 0) {
        c.fraction = std::numeric_limits<double>::quiet_NaN();
    } else {
        c.fraction = static_cast<double>(c.matches) / static_cast<double>(c.counted);
    }
    return c;
}

HolderModulus holder_diagnostic(const Trajectory& traj, double gamma) {
    if (!(gamma > 0.0 && gamma < 0.5)) {
        throw Error(ErrorCode::InvalidArgument, "holder_diagnostic: gamma must lie in (0, 1/2)");
    }
    HolderModulus h;
    for (std::size_t lag = 1; lag <= traj.n_steps; lag *= 2) {
        const double scale = std::pow(static_cast<double>(lag) * traj.dt, gamma);
        for (std::size_t k = 0; k + lag <= traj.n_steps; ++k) {
            h.x = std::max(h.x, std::abs(traj.xs[k + lag] - traj.xs[k]) / scale);
            h.y = std::max(h.y, std::abs(traj.ys[k + lag] - traj.ys[k]) / scale);
        }
    }
    return h;
}

double fit_log_slope(std::span<const double> dts, std::span<const double> errors) {
    if (dts.size() != errors.size() || dts.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "fit_log_slope: need at least two matching points");
    }
    const double n = static_cast<double>(dts.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < dts.size(); ++i) {
        const double lx = std::log(dts[i]);
        const double ly = std::log(errors[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceStudy strong_order_study(const ConvergenceConfig& cfg) {
    if (cfg.coarsest_level < 0 || cfg.finest_level < cfg.coarsest_level + 1 || cfg.finest_level > 30) {
        throw Error(ErrorCode::InvalidArgument, "strong_order_study: need at least two levels in [0, 30]");
    }
    if (cfg.n_paths < 1 || !(cfg.horizon > 0.0) || !(cfg.x0 > 0.0) || !(cfg.alpha >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "strong_order_study: invalid setup");
    }
    ModelParams gbm;
    gbm.r1 = gbm.r2 = cfg.r;
    gbm.alpha1 = gbm.alpha2 = cfg.alpha;
    gbm.k1 = gbm.k2 = 1.0;
    gbm.x0 = gbm.y0 = cfg.x0;

    const std::size_t n_levels = static_cast<std::size_t>(cfg.finest_level - cfg.coarsest_level + 1);
    const std::size_t fine_steps = std::size_t{1} << cfg.finest_level;
    const double fine_dt = cfg.horizon / static_cast<double>(fine_steps);
    const double m = cfg.r - 0.5 * cfg.alpha * cfg.alpha;

    // errors[path][level][scheme]
    std::vector<std::vector<std::array<double, 3>>> errors(cfg.n_paths, std::vector<std::array<double, 3>>(n_levels));
    detail::parallel_for(cfg.n_paths, cfg.workers, [&](std::size_t j) {
        const BrownianPath fine = generate_path(cfg.seed, static_cast<std::uint32_t>(j), fine_dt, fine_steps);
        for (std::size_t l = 0; l < n_levels; ++l) {
            const int level = cfg.coarsest_level + static_cast<int>(l);
            const BrownianPath path = coarsen(fine, std::size_t{1} << (cfg.finest_level - level));
            const double w_end = brownian_values(path.inc1).back();
            const double exact = cfg.x0 * std::exp(m * cfg.horizon + cfg.alpha * w_end);
            const double em = simulate(gbm, SchemeId::EulerMaruyama, path).xs.back();
            const double mil = simulate(gbm, SchemeId::Milstein, path).xs.back();
            const double le = simulate(gbm, SchemeId::LogEuler, path).xs.back();
            errors[j][l] = {std::abs(em - exact), std::abs(mil - exact), std::abs(le - exact) / exact};
        }
    });

    ConvergenceStudy study;
    study.r = cfg.r;
    study.alpha = cfg.alpha;
    study.x0 = cfg.x0;
    study.horizon = cfg.horizon;
    study.n_paths = cfg.n_paths;
    std::vector<double> dts, e_em, e_mil;
    for (std::size_t l = 0; l < n_levels; ++l) {
        ConvergenceLevel lev;
        lev.dt = cfg.horizon / static_cast<double>(std::size_t{1} << (cfg.coarsest_level + static_cast<int>(l)));
        for (std::size_t j = 0; j < cfg.n_paths; ++j) {
            lev.err_euler += errors[j][l][0];
            lev.err_milstein += errors[j][l][1];
            lev.err_log_euler = std::max(lev.err_log_euler, errors[j][l][2]);
        }
        lev.err_euler /= static_cast<double>(cfg.n_paths);
        lev.err_milstein /= static_cast<double>(cfg.n_paths);
        study.log_euler_max_rel_error = std::max(study.log_euler_max_rel_error, lev.err_log_euler);
        dts.push_back(lev.dt);
        e_em.push_back(lev.err_euler);
        e_mil.push_back(lev.err_milstein);
        study.levels.push_back(lev);
    }
    study.slope_euler = fit_log_slope(dts, e_em);
    study.slope_milstein = fit_log_slope(dts, e_mil);
    study.euler_in_window = within(study.slope_euler, kEulerSlopeLo, kEulerSlopeHi);
    study.milstein_in_window = within(study.slope_milstein, kMilsteinSlopeLo, kMilsteinSlopeHi);
    study.log_euler_exact = study.log_euler_max_rel_error <= kLogEulerExactTol;
    study.pass = study.euler_in_window && study.milstein_in_window && study.log_euler_exact;
    return study;
}

}  // namespace mutsim
