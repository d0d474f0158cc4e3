#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mutsim/integrate.hpp"
#include "mutsim/model.hpp"

namespace mutsim {

// A species counts as extinct in one replicate when its post-burn-in time
// average is below kExtinctTimeAverage and its terminal value below
// kExtinctTerminal.
inline constexpr double kExtinctTimeAverage = 0.01;
inline constexpr double kExtinctTerminal = 1e-3;

// More than this fraction of failed replicates fails the ensemble.
inline constexpr double kMaxFailureFraction = 0.10;

struct PathStats {
    double t_end = 0.0;
    double t_burn = 0.0;
    // Trapezoid time averages over [t_burn, t_end].
    double time_avg_x = 0.0;
    double time_avg_y = 0.0;
    // ln z(t_end) / t_end
    double log_growth_x = 0.0;
    double log_growth_y = 0.0;
    // Extrema of |X(t)| over [t_burn, t_end].
    double min_norm = 0.0;
    double max_norm = 0.0;
    std::size_t clamp_count = 0;
    double x_end = 0.0;
    double y_end = 0.0;
    double norm_mid = 0.0;  // |X| at the grid point nearest t_end / 2
    double norm_end = 0.0;
};

// Throws InvalidArgument for t_burn outside [0, t_end) or non-positive samples.
PathStats path_stats(const Trajectory& traj, double t_burn);

bool empirically_extinct(double time_avg, double terminal);

// Outcome tag implied by which species look extinct in this replicate.
Regime empirical_outcome(const PathStats& s);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;  // sample sd / sqrt(n); 0 when n == 1
};

MeanSe mean_se(std::span<const double> values);

// Linear interpolation between order statistics (Hyndman-Fan type 7).
double empirical_quantile(std::vector<double> values, double level);

struct ReplicateRecord {
    std::uint32_t replicate = 0;
    bool failed = false;
    std::string failure;
    PathStats stats;
};

struct MomentEstimate {
    double k = 0.0;
    MeanSe x;     // E[x(t_end)^k]
    MeanSe y;     // E[y(t_end)^k]
    MeanSe norm;  // E[|X(t_end)|^k]
};

struct EnsembleSummary {
    std::size_t n_replicates = 0;
    std::size_t n_failed = 0;
    std::vector<ReplicateRecord> replicates;  // replicate order, failures included
    MeanSe time_avg_x, time_avg_y;
    MeanSe log_growth_x, log_growth_y;
    std::vector<MomentEstimate> moments;
    // |X| at t_end and t_end/2 for successful replicates, replicate order.
    std::vector<double> norm_end;
    std::vector<double> norm_mid;
    double t_end = 0.0;
};

struct EnsembleConfig {
    SchemeId scheme = SchemeId::Milstein;
    std::size_t n_replicates = 1;
    double dt = 1e-3;
    double t_end = 200.0;
    double t_burn = 50.0;
    std::uint64_t seed = 42;
    std::vector<double> k_list{1.0, 2.0, 3.0};
    unsigned workers = 1;  // 0 = hardware concurrency; never affects results
};

// Number of grid steps for a horizon; throws InvalidArgument if t_end/dt is
// not (within 1e-9 relative) a positive integer.
std::size_t grid_steps(double t_end, double dt);

// Replicate j is driven by stream_id j. Overflowing replicates are recorded
// and excluded; more than kMaxFailureFraction of them throws ReplicateFailures.
EnsembleSummary run_ensemble(const ModelParams& p, const EnsembleConfig& cfg);

struct MomentCheck {
    double k = 0.0;
    MeanSe x, y, norm;
    double bound_x = 0.0;     // H1(k)
    double bound_y = 0.0;     // H2(k)
    double bound_norm = 0.0;  // 2^(k/2) (H1 + H2)
    bool pass_x = false, pass_y = false, pass_norm = false;
    bool pass = false;
};

// Passes when each empirical moment <= bound * (1 + 2 * se / mean).
MomentCheck moment_check(const EnsembleSummary& summary, const ModelParams& p, double k);

struct PermanenceCheck {
    double epsilon = 0.0;
    double beta1 = 0.0, beta2 = 0.0;          // quantiles of |X(t_end)|
    double beta1_mid = 0.0, beta2_mid = 0.0;  // same at t_end / 2
    bool beta1_stable = false, beta2_stable = false;
    bool pass = false;
};

inline constexpr double kQuantileStability = 0.20;

// Minimum ensemble size for an epsilon-quantile: kPermanenceSamplesPerTail / epsilon.
inline constexpr double kPermanenceSamplesPerTail = 10.0;

PermanenceCheck permanence_check(const EnsembleSummary& summary, double epsilon);

struct RegimeConcordance {
    Regime predicted = Regime::Boundary;
    std::size_t counted = 0;
    std::size_t matches = 0;
    double fraction = 0.0;  // NaN for Boundary (not asserted)
};

RegimeConcordance regime_concordance(const EnsembleSummary& summary, const ModelParams& p);

struct HolderModulus {
    double x = 0.0;
    double y = 0.0;
};

// max over lags L in {1, 2, 4, ...} and k of |z(t_{k+L}) - z(t_k)| / (L dt)^gamma.
HolderModulus holder_diagnostic(const Trajectory& traj, double gamma);

// Least-squares slope of log(err) against log(dt).
double fit_log_slope(std::span<const double> dts, std::span<const double> errors);

struct ConvergenceLevel {
    double dt = 0.0;
    double err_euler = 0.0;
    double err_milstein = 0.0;
    double err_log_euler = 0.0;  // max relative error over paths
};

struct ConvergenceStudy {
    double r = 0.0, alpha = 0.0, x0 = 0.0, horizon = 0.0;
    std::size_t n_paths = 0;
    std::vector<ConvergenceLevel> levels;
    double slope_euler = 0.0;
    double slope_milstein = 0.0;
    double log_euler_max_rel_error = 0.0;
    bool euler_in_window = false;
    bool milstein_in_window = false;
    bool log_euler_exact = false;
    bool pass = false;
};

inline constexpr double kMilsteinSlopeLo = 0.8, kMilsteinSlopeHi = 1.2;
inline constexpr double kEulerSlopeLo = 0.35, kEulerSlopeHi = 0.65;
inline constexpr double kLogEulerExactTol = 1e-12;

struct ConvergenceConfig {
    double r = 2.0;
    double alpha = 1.0;
    double x0 = 1.0;
    double horizon = 1.0;
    int coarsest_level = 4;  // dt = horizon * 2^-level
    int finest_level = 10;
    std::size_t n_paths = 50;
    std::uint64_t seed = 42;
    unsigned workers = 1;
};

// Strong error at the horizon for the geometric reduction (b = eps = 0),
// every level driven by coarsenings of one fine path per replicate and
// compared with the exact solution x0 exp((r - alpha^2/2) T + alpha W(T)).
ConvergenceStudy strong_order_study(const ConvergenceConfig& cfg);

}  // namespace mutsim
