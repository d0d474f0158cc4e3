#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mutsim/integrate.hpp"
#include "mutsim/model.hpp"
#include "mutsim/noise.hpp"

namespace mutsim {

// Closed-form solution of dZ = Z (r - damp Z) dt + alpha Z dW, Z(0) = z0:
//
//   Z(t) = E(t) / (1/z0 + damp * int_0^t E(s) ds),  E(s) = exp((r - alpha^2/2) s + alpha W(s))
//
// sampled on the increments' grid. The integral is the trapezoid rule on that
// grid, accumulated relative to the running maximum exponent so neither the
// numerator nor the integral overflows.
std::vector<double> stochastic_logistic_exact(double r, double damp, double alpha, double z0,
                                              std::span<const double> increments, double dt);

// Upper/lower comparison processes for both species on one Brownian path.
struct EnvelopeSet {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<double> lam_hi;  // x upper: damping eps1
    std::vector<double> lam_lo;  // x lower: damping b1/K1 + eps1
    std::vector<double> th_hi;   // y upper: damping eps2
    std::vector<double> th_lo;   // y lower: damping b2/K2 + eps2
};

EnvelopeSet build_envelopes(const ModelParams& p, const BrownianPath& path);

struct SpeciesSandwich {
    // Largest relative excursion outside [lo (1 - rel_tol), hi (1 + rel_tol)].
    double max_violation = 0.0;
    // Same with rel_tol = 0.
    double raw_violation = 0.0;
    // min_k (hi_k - z_k) / hi_k and min_k (z_k - lo_k) / lo_k; negative means outside.
    double upper_slack = 0.0;
    double lower_slack = 0.0;
    std::optional<std::size_t> first_violation;
};

struct SandwichReport {
    double rel_tol = 0.0;
    SpeciesSandwich x;
    SpeciesSandwich y;
    bool pass = false;
};

// Throws GridMismatch when the trajectory and envelopes are not on the same grid.
SandwichReport check_sandwich(const Trajectory& traj, const EnvelopeSet& env, double rel_tol);

}  // namespace mutsim
