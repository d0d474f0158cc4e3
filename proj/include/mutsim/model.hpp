#pragma once

// Two-species stochastic mutualism model:
//
//   dx = x (r1 - b1 x / (K1 + y) - eps1 x) dt + alpha1 x dW1
//   dy = y (r2 - b2 y / (K2 + x) - eps2 y) dt + alpha2 y dW2
//
// plus the closed-form quantities attached to it (equilibria, regime
// thresholds, moment bounds, time-average limits).

#include <array>
#include <string_view>

namespace mutsim {

struct ModelParams {
    double r1 = 0.0, r2 = 0.0;
    double b1 = 0.0, b2 = 0.0;
    double k1 = 0.0, k2 = 0.0;
    double eps1 = 0.0, eps2 = 0.0;
    double alpha1 = 0.0, alpha2 = 0.0;
    double x0 = 0.0, y0 = 0.0;
};

// Coefficients of one species' equation; `other` terms enter via K + other.
struct SpeciesCoeffs {
    double r, b, k, eps, alpha, z0;
};

SpeciesCoeffs species(const ModelParams& p, int which);

// r_i, b_i, K_i, eps_i > 0, alpha_i >= 0, x0, y0 > 0, all finite.
// Throws ConstraintViolation naming the first offending field.
void validate_strict(const ModelParams& p);

// Domain accepted by the numerical kernels: b_i, eps_i >= 0 (so the
// decoupled and geometric reductions are expressible), K_i > 0.
void validate_relaxed(const ModelParams& p);

// Preset constants (r1 = 1.2, r2 = 1, b1 = 0.7, b2 = 0.9, K = 2, eps1 = 0.8,
// eps2 = 0.7) with the given noise intensities and
// x0 = y0 = 0.5.
ModelParams preset_params(double alpha1, double alpha2);

struct State {
    double x = 0.0;
    double y = 0.0;
};

struct RatePair {
    double dx = 0.0;
    double dy = 0.0;
};

RatePair drift(const State& s, const ModelParams& p);
RatePair diffusion(const State& s, const ModelParams& p);

struct EquilibriumSet {
    State e1, e2, e3;
    State e_star;
    double residual = 0.0;

    // Both solver branches are kept so callers can audit their agreement.
    State newton;
    State fixed_point;
    bool newton_converged = false;
    bool fixed_point_converged = false;
    int newton_iterations = 0;
    int fixed_point_iterations = 0;
};

inline constexpr double kDefaultEquilibriumTol = 1e-10;

// Residual max-norm of the per-capita growth rates at s.
double equilibrium_residual(const State& s, const ModelParams& p);

// Requires eps_i > 0. Throws NoConvergence when neither branch reaches tol
// or the two branches disagree by more than 10 * tol.
EquilibriumSet equilibria(const ModelParams& p, double tol = kDefaultEquilibriumTol);

enum class Regime {
    Permanent,
    XExtinctYPersistent,
    YExtinctXPersistent,
    BothExtinct,
    Boundary,
};

std::string_view to_string(Regime r);

struct RegimeClassification {
    Regime tag = Regime::Boundary;
    std::array<double, 2> margins{};  // r_i - alpha_i^2 / 2
};

RegimeClassification classify(const ModelParams& p);

// limsup E[z^k] <= (1/eps^k) * ((1 + k r + k(k-1)/2 alpha^2) / (k + 1))^(k+1)
double moment_bound(const ModelParams& p, double k, int which);

// Bound on limsup E|X|^k: 2^(k/2) (H1(k) + H2(k)).
double norm_moment_bound(const ModelParams& p, double k);

struct PersistenceLimits {
    // K_i (r_i - alpha_i^2/2) / (b_i + eps_i K_i): lower bound on the long-run
    // time average when both margins are positive.
    std::array<double, 2> lower_bound{};
    // (r_i - alpha_i^2/2) / (b_i/K_i + eps_i): exact long-run time average
    // when the other species goes extinct.
    std::array<double, 2> solo_limit{};
};

PersistenceLimits persistence_limits(const ModelParams& p);

}  // namespace mutsim
