#include "mutsim/mutsim.h"

#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "mutsim/commands.hpp"
#include "mutsim/config.hpp"
#include "mutsim/envelopes.hpp"
#include "mutsim/error.hpp"
#include "mutsim/integrate.hpp"
#include "mutsim/model.hpp"
#include "mutsim/noise.hpp"

struct mutsim_config {
    mutsim::RunConfig cfg;
    std::string text;
};

struct mutsim_result {
    mutsim::CommandOutput out;
};

struct mutsim_path {
    mutsim::BrownianPath path;
};

struct mutsim_trajectory {
    mutsim::Trajectory traj;
};

struct mutsim_envelopes {
    mutsim::EnvelopeSet env;
};

namespace {

thread_local std::string g_last_error;

mutsim_status status_of(mutsim::ErrorCode code) {
    return mutsim::exit_status(code) == mutsim::kExitNumerical ? MUTSIM_NUMERICAL : MUTSIM_VALIDATION;
}

mutsim_status fail(mutsim_status s, const std::string& error, const std::string& message) {
    nlohmann::ordered_json j{{"error", error}, {"message", message}};
    g_last_error = j.dump();
    return s;
}

mutsim_status null_argument(const char* name) {
    return fail(MUTSIM_VALIDATION, "InvalidArgument", std::string(name) + " must not be null");
}

template <class F>
mutsim_status guarded(F&& body) {
    g_last_error.clear();
    try {
        return body();
    } catch (const mutsim::Error& e) {
        g_last_error = e.to_json();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        return fail(MUTSIM_INTERNAL, "Internal", "out of memory");
    } catch (const std::exception& e) {
        return fail(MUTSIM_INTERNAL, "Internal", e.what());
    }
}

mutsim::ModelParams from_c(const mutsim_params& p) {
    return {p.r1, p.r2, p.b1, p.b2, p.k1, p.k2, p.eps1, p.eps2, p.alpha1, p.alpha2, p.x0, p.y0};
}

mutsim_params to_c(const mutsim::ModelParams& p) {
    return {p.r1, p.r2, p.b1, p.b2, p.k1, p.k2, p.eps1, p.eps2, p.alpha1, p.alpha2, p.x0, p.y0};
}

mutsim_point to_c(const mutsim::State& s) { return {s.x, s.y}; }

mutsim_regime to_c(mutsim::Regime r) {
    switch (r) {
        case mutsim::Regime::Permanent: return MUTSIM_PERMANENT;
        case mutsim::Regime::XExtinctYPersistent: return MUTSIM_X_EXTINCT_Y_PERSISTENT;
        case mutsim::Regime::YExtinctXPersistent: return MUTSIM_Y_EXTINCT_X_PERSISTENT;
        case mutsim::Regime::BothExtinct: return MUTSIM_BOTH_EXTINCT;
        case mutsim::Regime::Boundary: break;
    }
    return MUTSIM_BOUNDARY;
}

// C-side copies of the name tables; alive for the process lifetime.
const std::vector<std::string>& key_names() {
    static const std::vector<std::string> out(mutsim::config_keys().begin(), mutsim::config_keys().end());
    return out;
}

const std::vector<std::string>& command_list() {
    static const std::vector<std::string> out(mutsim::command_names().begin(), mutsim::command_names().end());
    return out;
}

}  // namespace

extern "C" {

const char* mutsim_version(void) { return mutsim::kToolVersion.data(); }

const char* mutsim_last_error_json(void) { return g_last_error.c_str(); }

mutsim_status mutsim_config_create(mutsim_config** out) {
    if (!out) return null_argument("out");
    return guarded([&] {
        *out = new mutsim_config();
        return MUTSIM_OK;
    });
}

void mutsim_config_destroy(mutsim_config* cfg) { delete cfg; }

mutsim_status mutsim_config_parse(mutsim_config* cfg, const char* text) {
    if (!cfg) return null_argument("cfg");
    if (!text) return null_argument("text");
    return guarded([&] {
        cfg->cfg = mutsim::parse_config(text, cfg->cfg);
        return MUTSIM_OK;
    });
}

mutsim_status mutsim_config_set(mutsim_config* cfg, const char* key, const char* value) {
    if (!cfg) return null_argument("cfg");
    if (!key) return null_argument("key");
    if (!value) return null_argument("value");
    return guarded([&] {
        mutsim::apply_setting(cfg->cfg, key, value, 0);
        return MUTSIM_OK;
    });
}

mutsim_status mutsim_config_validate(const mutsim_config* cfg) {
    if (!cfg) return null_argument("cfg");
    return guarded([&] {
        mutsim::validate(cfg->cfg);
        return MUTSIM_OK;
    });
}

const char* mutsim_config_text(mutsim_config* cfg) {
    if (!cfg) return "";
    cfg->text = mutsim::to_config_text(cfg->cfg);
    return cfg->text.c_str();
}

size_t mutsim_config_key_count(void) { return key_names().size(); }

const char* mutsim_config_key_name(size_t index) {
    return index < key_names().size() ? key_names()[index].c_str() : nullptr;
}

size_t mutsim_command_count(void) { return command_list().size(); }

const char* mutsim_command_name(size_t index) {
    return index < command_list().size() ? command_list()[index].c_str() : nullptr;
}

mutsim_status mutsim_run(const mutsim_config* cfg, const char* command, unsigned workers, mutsim_result** out) {
    if (!cfg) return null_argument("cfg");
    if (!command) return null_argument("command");
    if (!out) return null_argument("out");
    *out = nullptr;
    return guarded([&] {
        auto* res = new mutsim_result{mutsim::run_command(command, cfg->cfg, workers)};
        *out = res;
        return res->out.exit_code == mutsim::kExitVerification ? MUTSIM_VERIFICATION : MUTSIM_OK;
    });
}

void mutsim_result_destroy(mutsim_result* res) { delete res; }

int mutsim_result_exit_code(const mutsim_result* res) { return res ? res->out.exit_code : -1; }

const char* mutsim_result_stdout(const mutsim_result* res) { return res ? res->out.stdout_text.c_str() : ""; }

size_t mutsim_result_file_count(const mutsim_result* res) { return res ? res->out.files.size() : 0; }

const char* mutsim_result_file(const mutsim_result* res, size_t index) {
    return res && index < res->out.files.size() ? res->out.files[index].c_str() : nullptr;
}

mutsim_params mutsim_preset_params(double alpha1, double alpha2) {
    return to_c(mutsim::preset_params(alpha1, alpha2));
}

mutsim_status mutsim_classify(const mutsim_params* p, mutsim_regime* tag, double margins[2]) {
    if (!p) return null_argument("p");
    if (!tag) return null_argument("tag");
    return guarded([&] {
        const auto c = mutsim::classify(from_c(*p));
        *tag = to_c(c.tag);
        if (margins) {
            margins[0] = c.margins[0];
            margins[1] = c.margins[1];
        }
        return MUTSIM_OK;
    });
}

mutsim_status mutsim_equilibria_solve(const mutsim_params* p, double tol, mutsim_equilibria* out) {
    if (!p) return null_argument("p");
    if (!out) return null_argument("out");
    return guarded([&] {
        const auto e = mutsim::equilibria(from_c(*p), tol);
        *out = {to_c(e.e1),     to_c(e.e2),          to_c(e.e3),         to_c(e.e_star),
                e.residual,     to_c(e.newton),      to_c(e.fixed_point), e.newton_converged ? 1 : 0,
                e.fixed_point_converged ? 1 : 0};
        return MUTSIM_OK;
    });
}

mutsim_status mutsim_moment_bound(const mutsim_params* p, double k, int species, double* out) {
    if (!p) return null_argument("p");
    if (!out) return null_argument("out");
    return guarded([&] {
        *out = mutsim::moment_bound(from_c(*p), k, species);
        return MUTSIM_OK;
    });
}

mutsim_status mutsim_persistence_limits(const mutsim_params* p, double lower_bound[2], double solo_limit[2]) {
    if (!p) return null_argument("p");
    return guarded([&] {
        const auto lim = mutsim::persistence_limits(from_c(*p));
        for (int i = 0; i < 2; ++i) {
            if (lower_bound) lower_bound[i] = lim.lower_bound[i];
            if (solo_limit) solo_limit[i] = lim.solo_limit[i];
        }
        return MUTSIM_OK;
    });
}

mutsim_status mutsim_path_generate(uint64_t seed, uint32_t stream_id, double dt, size_t n_steps, mutsim_path** out) {
    if (!out) return null_argument("out");
    return guarded([&] {
        *out = new mutsim_path{mutsim::generate_path(seed, stream_id, dt, n_steps)};
        return MUTSIM_OK;
    });
}

mutsim_status mutsim_path_coarsen(const mutsim_path* path, size_t factor, mutsim_path** out) {
    if (!path) return null_argument("path");
    if (!out) return null_argument("out");
    return guarded([&] {
        *out = new mutsim_path{mutsim::coarsen(path->path, factor)};
        return MUTSIM_OK;
    });
}

void mutsim_path_destroy(mutsim_path* path) { delete path; }

size_t mutsim_path_steps(const mutsim_path* path) { return path ? path->path.n_steps : 0; }

double mutsim_path_dt(const mutsim_path* path) { return path ? path->path.dt : 0.0; }

const double* mutsim_path_increments(const mutsim_path* path, int component) {
    if (!path || (component != 1 && component != 2)) return nullptr;
    return path->path.increments(component).data();
}

mutsim_status mutsim_simulate(const mutsim_params* p, mutsim_scheme scheme, const mutsim_path* path,
                              mutsim_trajectory** out) {
    if (!p) return null_argument("p");
    if (!path) return null_argument("path");
    if (!out) return null_argument("out");
    mutsim::SchemeId id;
    switch (scheme) {
        case MUTSIM_EULER_MARUYAMA: id = mutsim::SchemeId::EulerMaruyama; break;
        case MUTSIM_MILSTEIN: id = mutsim::SchemeId::Milstein; break;
        case MUTSIM_LOG_EULER: id = mutsim::SchemeId::LogEuler; break;
        default: return fail(MUTSIM_VALIDATION, "InvalidArgument", "unknown scheme id");
    }
    return guarded([&] {
        *out = new mutsim_trajectory{mutsim::simulate(from_c(*p), id, path->path)};
        return MUTSIM_OK;
    });
}

void mutsim_trajectory_destroy(mutsim_trajectory* traj) { delete traj; }

size_t mutsim_trajectory_length(const mutsim_trajectory* traj) { return traj ? traj->traj.times.size() : 0; }

const double* mutsim_trajectory_times(const mutsim_trajectory* traj) {
    return traj ? traj->traj.times.data() : nullptr;
}

const double* mutsim_trajectory_x(const mutsim_trajectory* traj) { return traj ? traj->traj.xs.data() : nullptr; }

const double* mutsim_trajectory_y(const mutsim_trajectory* traj) { return traj ? traj->traj.ys.data() : nullptr; }

size_t mutsim_trajectory_clamps(const mutsim_trajectory* traj) { return traj ? traj->traj.clamp_count : 0; }

mutsim_status mutsim_envelopes_build(const mutsim_params* p, const mutsim_path* path, mutsim_envelopes** out) {
    if (!p) return null_argument("p");
    if (!path) return null_argument("path");
    if (!out) return null_argument("out");
    return guarded([&] {
        *out = new mutsim_envelopes{mutsim::build_envelopes(from_c(*p), path->path)};
        return MUTSIM_OK;
    });
}

void mutsim_envelopes_destroy(mutsim_envelopes* env) { delete env; }

mutsim_status mutsim_check_sandwich(const mutsim_trajectory* traj, const mutsim_envelopes* env, double rel_tol,
                                    mutsim_sandwich* out) {
    if (!traj) return null_argument("traj");
    if (!env) return null_argument("env");
    if (!out) return null_argument("out");
    return guarded([&] {
        const auto r = mutsim::check_sandwich(traj->traj, env->env, rel_tol);
        auto first = [](const std::optional<std::size_t>& i) { return i ? static_cast<int64_t>(*i) : int64_t{-1}; };
        *out = {r.x.max_violation, r.y.max_violation, r.x.raw_violation, r.y.raw_violation,
                first(r.x.first_violation), first(r.y.first_violation), r.pass ? 1 : 0};
        return MUTSIM_OK;
    });
}

}  // extern "C"
