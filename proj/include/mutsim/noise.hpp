#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mutsim {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Output is a
// pure function of (key, counter).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter counter, Key key);
};

// Uniform double in the open interval (0, 1) built from the top 52 bits of
// two 32-bit words.
double open_uniform(std::uint32_t hi, std::uint32_t lo);

// Standard normal quantile (Wichura's AS241, ~1e-16 relative accuracy).
// Uses only arithmetic, log and sqrt, so it is reproducible bit-for-bit.
double normal_quantile(double p);

// One N(0,1) draw keyed by (seed, stream, component, index).
double keyed_normal(std::uint64_t seed, std::uint32_t stream_id, std::uint32_t component, std::uint64_t index);

struct BrownianPath {
    double dt = 0.0;
    std::size_t n_steps = 0;
    std::vector<double> inc1;
    std::vector<double> inc2;
    std::uint64_t seed = 0;
    std::uint32_t stream_id = 0;

    std::span<const double> increments(int component) const { return component == 1 ? inc1 : inc2; }
};

// W(t_k) for k = 0..n as prefix sums of the increments; W(0) = 0.
std::vector<double> brownian_values(std::span<const double> increments);

// Throws InvalidArgument for dt <= 0 or non-finite dt.
BrownianPath generate_path(std::uint64_t seed, std::uint32_t stream_id, double dt, std::size_t n_steps);

// Sums consecutive blocks of `factor` increments. Throws NonDivisible when
// factor is zero or does not divide n_steps.
BrownianPath coarsen(const BrownianPath& path, std::size_t factor);

}  // namespace mutsim
