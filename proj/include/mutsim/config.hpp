#pragma once

// Flat `key = value` run configuration. `#` starts a comment; blank lines are
// ignored; k_list is comma-separated. Command-line overrides go through
// apply_setting with line 0.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mutsim/integrate.hpp"
#include "mutsim/model.hpp"

namespace mutsim {

struct RunConfig {
    ModelParams params = preset_params(0.0, 0.0);
    SchemeId scheme = SchemeId::Milstein;
    double dt = 1e-3;
    double t_end = 200.0;
    std::optional<double> t_burn;  // unset: t_end / 4
    std::uint64_t seed = 42;
    std::size_t replicates = 1;
    std::vector<double> k_list{1.0, 2.0, 3.0};
    double epsilon = 0.05;
    std::string out_dir = "out";

    // key -> line it was last set from (0 = flag); used in error messages.
    std::map<std::string, std::size_t, std::less<>> origin;

    double burn_in() const { return t_burn ? *t_burn : t_end / 4.0; }
};

std::span<const std::string_view> config_keys();

// Throws UnknownKey, MalformedValue or ConstraintViolation for per-value
// constraints (e.g. alpha1 < 0).
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value, std::size_t line);

// Parses onto `base` (defaults when omitted). Does not run cross-field checks.
RunConfig parse_config(std::string_view text, RunConfig base = {});

// Cross-field checks: t_burn < t_end, t_end a whole multiple of dt.
void validate(const RunConfig& cfg);

// Canonical config text that parses back to the same RunConfig.
std::string to_config_text(const RunConfig& cfg);

}  // namespace mutsim
