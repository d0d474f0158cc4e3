#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mutsim/config.hpp"

namespace mutsim {

inline constexpr std::string_view kToolName = "mutsim";
inline constexpr std::string_view kToolVersion = "1.0.0";

struct CommandOutput {
    int exit_code = 0;        // 0 ok, 3 verification failure
    std::string stdout_text;  // JSON document, newline-terminated
    std::vector<std::string> files;  // written paths, in write order
};

// classify, equilibria, simulate, ensemble, verify_envelopes, converge, figure
std::span<const std::string_view> command_names();

// Validates the config, runs the command and writes its files under
// cfg.out_dir. `workers` sizes the replicate pool and never changes output
// bytes. Module errors propagate as mutsim::Error.
CommandOutput run_command(std::string_view command, const RunConfig& cfg, unsigned workers = 1);

// Horizon and dt ladder of the geometric-reduction study behind `converge`.
inline constexpr double kConvergeHorizon = 1.0;
inline constexpr int kConvergeCoarsestLevel = 4;
inline constexpr int kConvergeFinestLevel = 10;

// Figure presets (x0 = y0 = 0.5, t_end = 200; dt, seed and scheme come from the config).
struct FigurePanel {
    char name;
    double alpha1;
    double alpha2;
};

inline constexpr FigurePanel kFigurePanels[] = {
    {'a', 0.0, 0.0},
    {'b', 2.2, 1.8},
    {'c', 0.1, 1.6},
    {'d', 0.01, 0.01},
};
inline constexpr double kFigureHorizon = 200.0;

}  // namespace mutsim
