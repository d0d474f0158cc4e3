#include "mutsim/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "mutsim/analysis.hpp"
#include "mutsim/error.hpp"
#include "mutsim/format.hpp"

namespace mutsim {

namespace {

constexpr std::array<std::string_view, 21> kKeys{
    "r1",   "r2",   "b1", "b2",    "k1",     "k2",         "eps1",     "eps2",   "alpha1", "alpha2", "x0",
    "y0",   "scheme", "dt", "t_end", "t_burn", "seed",     "replicates", "k_list", "epsilon", "out_dir"};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string where(std::size_t line) {
    return line == 0 ? std::string("command line") : "line " + std::to_string(line);
}

[[noreturn]] void malformed(std::string_view key, std::string_view value, std::size_t line, const char* expected) {
    throw Error(ErrorCode::MalformedValue,
                std::string(key) + " (" + where(line) + "): cannot parse '" + std::string(value) + "' as " + expected,
                std::string(key), line);
}

[[noreturn]] void violation(std::string_view key, std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ConstraintViolation, std::string(key) + " (" + where(line) + "): " + what,
                std::string(key), line);
}

double parse_double(std::string_view key, std::string_view value, std::size_t line) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
        malformed(key, value, line, "a finite number");
    }
    return out;
}

template <class Int>
Int parse_integer(std::string_view key, std::string_view value, std::size_t line) {
    Int out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) malformed(key, value, line, "a non-negative integer");
    return out;
}

double positive(std::string_view key, std::string_view value, std::size_t line) {
    const double v = parse_double(key, value, line);
    if (!(v > 0.0)) violation(key, line, "must be > 0");
    return v;
}

double nonnegative(std::string_view key, std::string_view value, std::size_t line) {
    const double v = parse_double(key, value, line);
    if (!(v >= 0.0)) violation(key, line, "must be >= 0");
    return v;
}

}  // namespace

std::span<const std::string_view> config_keys() { return kKeys; }

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view raw, std::size_t line) {
    const std::string_view value = trim(raw);
    ModelParams& p = cfg.params;
    using Setter = std::function<void()>;
    const std::array<std::pair<std::string_view, Setter>, 21> table{{
        {"r1", [&] { p.r1 = positive(key, value, line); }},
        {"r2", [&] { p.r2 = positive(key, value, line); }},
        {"b1", [&] { p.b1 = positive(key, value, line); }},
        {"b2", [&] { p.b2 = positive(key, value, line); }},
        {"k1", [&] { p.k1 = positive(key, value, line); }},
        {"k2", [&] { p.k2 = positive(key, value, line); }},
        {"eps1", [&] { p.eps1 = positive(key, value, line); }},
        {"eps2", [&] { p.eps2 = positive(key, value, line); }},
        {"alpha1", [&] { p.alpha1 = nonnegative(key, value, line); }},
        {"alpha2", [&] { p.alpha2 = nonnegative(key, value, line); }},
        {"x0", [&] { p.x0 = positive(key, value, line); }},
        {"y0", [&] { p.y0 = positive(key, value, line); }},
        {"scheme",
         [&] {
             const auto s = parse_scheme(value);
             if (!s) malformed(key, value, line, "one of milstein, euler_maruyama, log_euler");
             cfg.scheme = *s;
         }},
        {"dt", [&] { cfg.dt = positive(key, value, line); }},
        {"t_end", [&] { cfg.t_end = positive(key, value, line); }},
        {"t_burn", [&] { cfg.t_burn = nonnegative(key, value, line); }},
        {"seed", [&] { cfg.seed = parse_integer<std::uint64_t>(key, value, line); }},
        {"replicates",
         [&] {
             const auto n = parse_integer<std::uint64_t>(key, value, line);
             if (n < 1 || n > std::numeric_limits<std::uint32_t>::max()) violation(key, line, "must be in [1, 2^32)");
             cfg.replicates = static_cast<std::size_t>(n);
         }},
        {"k_list",
         [&] {
             std::vector<double> ks;
             std::string_view rest = value;
             while (true) {
                 const auto comma = rest.find(',');
                 const std::string_view item = trim(rest.substr(0, comma));
                 if (item.empty()) malformed(key, value, line, "a comma-separated list of numbers");
                 const double k = parse_double(key, item, line);
                 if (!(k > 0.0)) violation(key, line, "moment orders must be > 0");
                 ks.push_back(k);
                 if (comma == std::string_view::npos) break;
                 rest = rest.substr(comma + 1);
             }
             cfg.k_list = std::move(ks);
         }},
        {"epsilon",
         [&] {
             const double e = parse_double(key, value, line);
             if (!(e > 0.0 && e < 1.0)) violation(key, line, "must lie in (0, 1)");
             cfg.epsilon = e;
         }},
        {"out_dir",
         [&] {
             if (value.empty()) malformed(key, value, line, "a non-empty path");
             cfg.out_dir = std::string(value);
         }},
    }};
    for (const auto& [name, set] : table) {
        if (name == key) {
            set();
            cfg.origin[std::string(key)] = line;
            return;
        }
    }
    throw Error(ErrorCode::UnknownKey, "unknown key '" + std::string(key) + "' (" + where(line) + ")",
                std::string(key), line);
}

RunConfig parse_config(std::string_view text, RunConfig base) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::MalformedValue, "line " + std::to_string(line_no) + ": expected 'key = value'",
                        std::string(trim(line)), line_no);
        }
        const std::string_view key = trim(line.substr(0, eq));
        apply_setting(base, key, line.substr(eq + 1), line_no);
    }
    return base;
}

void validate(const RunConfig& cfg) {
    auto line_of = [&](std::string_view key) -> std::size_t {
        const auto it = cfg.origin.find(key);
        return it == cfg.origin.end() ? 0 : it->second;
    };
    try {
        validate_strict(cfg.params);
    } catch (const Error& e) {
        violation(e.key(), line_of(e.key()), "must satisfy the model constraints (" + std::string(e.what()) + ")");
    }
    try {
        grid_steps(cfg.t_end, cfg.dt);
    } catch (const Error&) {
        const char* key = cfg.origin.count("t_end") || !cfg.origin.count("dt") ? "t_end" : "dt";
        violation(key, line_of(key),
                  "t_end = " + format_shortest(cfg.t_end) + " must be a whole multiple of dt = " +
                      format_shortest(cfg.dt));
    }
    if (!(cfg.burn_in() < cfg.t_end)) violation("t_burn", line_of("t_burn"), "must be < t_end");
}

std::string to_config_text(const RunConfig& cfg) {
    const ModelParams& p = cfg.params;
    std::ostringstream os;
    auto kv = [&](std::string_view k, const std::string& v) { os << k << " = " << v << '\n'; };
    kv("r1", format_shortest(p.r1));
    kv("r2", format_shortest(p.r2));
    kv("b1", format_shortest(p.b1));
    kv("b2", format_shortest(p.b2));
    kv("k1", format_shortest(p.k1));
    kv("k2", format_shortest(p.k2));
    kv("eps1", format_shortest(p.eps1));
    kv("eps2", format_shortest(p.eps2));
    kv("alpha1", format_shortest(p.alpha1));
    kv("alpha2", format_shortest(p.alpha2));
    kv("x0", format_shortest(p.x0));
    kv("y0", format_shortest(p.y0));
    kv("scheme", std::string(to_string(cfg.scheme)));
    kv("dt", format_shortest(cfg.dt));
    kv("t_end", format_shortest(cfg.t_end));
    kv("t_burn", format_shortest(cfg.burn_in()));
    kv("seed", std::to_string(cfg.seed));
    kv("replicates", std::to_string(cfg.replicates));
    std::string ks;
    for (std::size_t i = 0; i < cfg.k_list.size(); ++i) ks += (i ? "," : "") + format_shortest(cfg.k_list[i]);
    kv("k_list", ks);
    kv("epsilon", format_shortest(cfg.epsilon));
    kv("out_dir", cfg.out_dir);
    return os.str();
}

}  // namespace mutsim
