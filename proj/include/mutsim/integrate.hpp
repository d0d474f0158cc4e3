#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mutsim/model.hpp"
#include "mutsim/noise.hpp"

namespace mutsim {

enum class SchemeId { EulerMaruyama, Milstein, LogEuler };

std::string_view to_string(SchemeId s);
std::optional<SchemeId> parse_scheme(std::string_view name);

struct Increment {
    double dw1 = 0.0;
    double dw2 = 0.0;
};

// Where Euler-Maruyama and Milstein land when a component would become
// non-positive: a fixed fraction of that component's initial value.
inline constexpr double kClampFraction = 1e-12;

struct StepResult {
    State state;
    int clamps = 0;  // components replaced by the floor in this step
};

// x' = x + f(x,y) dt + alpha1 x dW1 + (alpha1^2 / 2) x (dW1^2 - dt), same for y.
// Throws Overflow when a component leaves the finite range.
StepResult step_milstein(const State& s, const ModelParams& p, const Increment& dw, double dt);
StepResult step_euler(const State& s, const ModelParams& p, const Increment& dw, double dt);

// Euler on (ln x, ln y). Output is positive by construction; clamps is always 0.
StepResult step_log_euler(const State& s, const ModelParams& p, const Increment& dw, double dt);

StepResult step(SchemeId scheme, const State& s, const ModelParams& p, const Increment& dw, double dt);

struct Trajectory {
    double dt = 0.0;
    std::size_t n_steps = 0;
    std::vector<double> times;
    std::vector<double> xs;
    std::vector<double> ys;
    SchemeId scheme = SchemeId::Milstein;
    std::uint64_t seed = 0;
    std::uint32_t stream_id = 0;
    std::size_t clamp_count = 0;

    double t_end() const { return times.empty() ? 0.0 : times.back(); }
};

// Runs `scheme` over every increment of `path`. Step failures are rethrown as
// Overflow with the failing step index in the message.
Trajectory simulate(const ModelParams& p, SchemeId scheme, const BrownianPath& path);

}  // namespace mutsim
