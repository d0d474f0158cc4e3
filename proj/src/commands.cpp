#include "mutsim/commands.hpp"

#include <array>
#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "mutsim/analysis.hpp"
#include "mutsim/envelopes.hpp"
#include "mutsim/error.hpp"
#include "mutsim/format.hpp"
#include "mutsim/noise.hpp"

namespace mutsim {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr std::array<std::string_view, 7> kCommands{"classify", "equilibria",       "simulate", "ensemble",
                                                    "verify_envelopes", "converge", "figure"};

json pair(double a, double b) { return json::array({a, b}); }
json pair(const State& s) { return pair(s.x, s.y); }

json mean_se_json(const MeanSe& m) { return json{{"mean", m.mean}, {"se", m.se}}; }

json config_json(const RunConfig& cfg) {
    const ModelParams& p = cfg.params;
    return json{{"r1", p.r1},         {"r2", p.r2},       {"b1", p.b1},
                {"b2", p.b2},         {"k1", p.k1},       {"k2", p.k2},
                {"eps1", p.eps1},     {"eps2", p.eps2},   {"alpha1", p.alpha1},
                {"alpha2", p.alpha2}, {"x0", p.x0},       {"y0", p.y0},
                {"scheme", std::string(to_string(cfg.scheme))},
                {"dt", cfg.dt},       {"t_end", cfg.t_end}, {"t_burn", cfg.burn_in()},
                {"seed", cfg.seed},   {"replicates", cfg.replicates},
                {"k_list", cfg.k_list}, {"epsilon", cfg.epsilon}, {"out_dir", cfg.out_dir}};
}

json classification_json(const RegimeClassification& c) {
    return json{{"tag", std::string(to_string(c.tag))}, {"margins", pair(c.margins[0], c.margins[1])}};
}

json equilibria_json(const EquilibriumSet& e) {
    return json{{"e1", pair(e.e1)},
                {"e2", pair(e.e2)},
                {"e3", pair(e.e3)},
                {"e_star", pair(e.e_star)},
                {"residual", e.residual},
                {"newton", {{"converged", e.newton_converged}, {"iterations", e.newton_iterations}, {"point", pair(e.newton)}}},
                {"fixed_point",
                 {{"converged", e.fixed_point_converged},
                  {"iterations", e.fixed_point_iterations},
                  {"point", pair(e.fixed_point)}}}};
}

json analytic_json(const ModelParams& p, const std::vector<double>& k_list) {
    json out;
    try {
        out["equilibria"] = equilibria_json(equilibria(p));
    } catch (const Error& e) {
        out["equilibria"] = json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    }
    json bounds = json::array();
    for (double k : k_list) {
        bounds.push_back(json{{"k", k},
                              {"h1", moment_bound(p, k, 1)},
                              {"h2", moment_bound(p, k, 2)},
                              {"norm_bound", norm_moment_bound(p, k)}});
    }
    out["moment_bounds"] = bounds;
    const PersistenceLimits lim = persistence_limits(p);
    out["persistence_limits"] = json{{"lower_bound", pair(lim.lower_bound[0], lim.lower_bound[1])},
                                     {"solo_limit", pair(lim.solo_limit[0], lim.solo_limit[1])}};
    return out;
}

class Run {
public:
    Run(std::string_view command, const RunConfig& cfg) : command_(command), cfg_(cfg), dir_(cfg.out_dir) {}

    void write(const std::string& name, std::string_view bytes) {
        const fs::path path = dir_ / name;
        write_file(path, bytes);
        out_.files.push_back(path.string());
        names_.push_back(name);
    }

    void write_json(const std::string& name, const json& doc) { write(name, doc.dump(2) + "\n"); }

    json manifest_base() const {
        json m;
        m["tool"] = std::string(kToolName);
        m["version"] = std::string(kToolVersion);
        m["command"] = std::string(command_);
        m["config"] = config_json(cfg_);
        return m;
    }

    // Manifest goes last so its output index covers every other file.
    void finish(json manifest, const json& stdout_doc) {
        manifest["outputs"] = names_;
        write_json("manifest.json", manifest);
        out_.stdout_text = stdout_doc.dump() + "\n";
    }

    CommandOutput& output() { return out_; }

private:
    std::string_view command_;
    const RunConfig& cfg_;
    fs::path dir_;
    CommandOutput out_;
    std::vector<std::string> names_;
};

json model_manifest(Run& run, const RunConfig& cfg) {
    json m = run.manifest_base();
    m["classification"] = classification_json(classify(cfg.params));
    m["analytic"] = analytic_json(cfg.params, cfg.k_list);
    return m;
}

CommandOutput cmd_classify(const RunConfig& cfg) {
    CommandOutput out;
    out.stdout_text = classification_json(classify(cfg.params)).dump() + "\n";
    return out;
}

CommandOutput cmd_equilibria(const RunConfig& cfg) {
    Run run("equilibria", cfg);
    const json doc = equilibria_json(equilibria(cfg.params));
    run.write_json("equilibria.json", doc);
    run.finish(model_manifest(run, cfg), doc);
    return run.output();
}

CommandOutput cmd_simulate(const RunConfig& cfg) {
    if (cfg.replicates != 1) {
        const auto it = cfg.origin.find("replicates");
        throw Error(ErrorCode::ConstraintViolation, "simulate runs a single trajectory; replicates must be 1",
                    "replicates", it == cfg.origin.end() ? 0 : it->second);
    }
    Run run("simulate", cfg);
    const BrownianPath path = generate_path(cfg.seed, 0, cfg.dt, grid_steps(cfg.t_end, cfg.dt));
    const Trajectory traj = simulate(cfg.params, cfg.scheme, path);
    run.write("trajectory.csv", trajectory_csv(traj));

    json m = model_manifest(run, cfg);
    m["clamp_count"] = traj.clamp_count;
    m["replicate_failures"] = 0;
    const json doc{{"trajectory", "trajectory.csv"},
                   {"terminal", pair(traj.xs.back(), traj.ys.back())},
                   {"clamp_count", traj.clamp_count}};
    run.finish(m, doc);
    return run.output();
}

std::string ensemble_csv(const EnsembleSummary& s) {
    std::string out = "replicate,time_avg_x,time_avg_y,log_growth_x,log_growth_y,clamp_count,failed\n";
    for (const auto& rec : s.replicates) {
        out += std::to_string(rec.replicate);
        out += ',';
        if (rec.failed) {
            out += "nan,nan,nan,nan,0,1\n";
            continue;
        }
        out += format_double(rec.stats.time_avg_x) + ',' + format_double(rec.stats.time_avg_y) + ',' +
               format_double(rec.stats.log_growth_x) + ',' + format_double(rec.stats.log_growth_y) + ',' +
               std::to_string(rec.stats.clamp_count) + ",0\n";
    }
    return out;
}

CommandOutput cmd_ensemble(const RunConfig& cfg, unsigned workers) {
    Run run("ensemble", cfg);
    EnsembleConfig ec;
    ec.scheme = cfg.scheme;
    ec.n_replicates = cfg.replicates;
    ec.dt = cfg.dt;
    ec.t_end = cfg.t_end;
    ec.t_burn = cfg.burn_in();
    ec.seed = cfg.seed;
    ec.k_list = cfg.k_list;
    ec.workers = workers;
    const EnsembleSummary s = run_ensemble(cfg.params, ec);

    json summary;
    summary["n_replicates"] = s.n_replicates;
    summary["n_failed"] = s.n_failed;
    summary["t_end"] = s.t_end;
    summary["t_burn"] = ec.t_burn;
    summary["time_avg_x"] = mean_se_json(s.time_avg_x);
    summary["time_avg_y"] = mean_se_json(s.time_avg_y);
    summary["log_growth_x"] = mean_se_json(s.log_growth_x);
    summary["log_growth_y"] = mean_se_json(s.log_growth_y);
    std::size_t clamps = 0;
    for (const auto& rec : s.replicates) clamps += rec.stats.clamp_count;
    summary["clamp_count"] = clamps;

    json moments = json::array();
    for (double k : cfg.k_list) {
        const MomentCheck c = moment_check(s, cfg.params, k);
        moments.push_back(json{{"k", k},
                               {"x", mean_se_json(c.x)},
                               {"y", mean_se_json(c.y)},
                               {"norm", mean_se_json(c.norm)},
                               {"bound_x", c.bound_x},
                               {"bound_y", c.bound_y},
                               {"bound_norm", c.bound_norm},
                               {"pass_x", c.pass_x},
                               {"pass_y", c.pass_y},
                               {"pass_norm", c.pass_norm},
                               {"pass", c.pass}});
    }
    summary["moments"] = moments;

    try {
        const PermanenceCheck pc = permanence_check(s, cfg.epsilon);
        summary["permanence"] = json{{"epsilon", pc.epsilon},
                                     {"beta1", pc.beta1},
                                     {"beta2", pc.beta2},
                                     {"beta1_mid", pc.beta1_mid},
                                     {"beta2_mid", pc.beta2_mid},
                                     {"beta1_stable", pc.beta1_stable},
                                     {"beta2_stable", pc.beta2_stable},
                                     {"pass", pc.pass}};
    } catch (const Error& e) {
        summary["permanence"] = json{{"epsilon", cfg.epsilon}, {"skipped", e.what()}};
    }

    const RegimeConcordance rc = regime_concordance(s, cfg.params);
    summary["regime_concordance"] = json{{"predicted", std::string(to_string(rc.predicted))},
                                         {"counted", rc.counted},
                                         {"matches", rc.matches},
                                         {"fraction", rc.fraction}};

    run.write("ensemble_stats.csv", ensemble_csv(s));
    run.write_json("ensemble_summary.json", summary);
    json m = model_manifest(run, cfg);
    m["replicate_failures"] = s.n_failed;
    run.finish(m, summary);
    return run.output();
}

json species_sandwich_json(const SpeciesSandwich& s) {
    json j{{"max_violation", s.max_violation},
           {"raw_violation", s.raw_violation},
           {"upper_slack", s.upper_slack},
           {"lower_slack", s.lower_slack}};
    j["first_violation"] = s.first_violation ? json(*s.first_violation) : json(nullptr);
    return j;
}

CommandOutput cmd_verify_envelopes(const RunConfig& cfg) {
    Run run("verify_envelopes", cfg);
    const std::size_t n_steps = grid_steps(cfg.t_end, cfg.dt);
    const double rel_tol = 10.0 * cfg.dt;
    bool all_pass = true;
    double worst_x = 0.0, worst_y = 0.0;
    json reps = json::array();
    for (std::size_t j = 0; j < cfg.replicates; ++j) {
        const BrownianPath path = generate_path(cfg.seed, static_cast<std::uint32_t>(j), cfg.dt, n_steps);
        const Trajectory traj = simulate(cfg.params, cfg.scheme, path);
        const SandwichReport r = check_sandwich(traj, build_envelopes(cfg.params, path), rel_tol);
        all_pass = all_pass && r.pass;
        worst_x = std::max(worst_x, r.x.max_violation);
        worst_y = std::max(worst_y, r.y.max_violation);
        reps.push_back(json{{"replicate", j},
                            {"pass", r.pass},
                            {"x", species_sandwich_json(r.x)},
                            {"y", species_sandwich_json(r.y)}});
    }
    const json report{{"scheme", std::string(to_string(cfg.scheme))},
                      {"rel_tol", rel_tol},
                      {"pass", all_pass},
                      {"max_violation_x", worst_x},
                      {"max_violation_y", worst_y},
                      {"replicates", reps}};
    run.write_json("envelope_report.json", report);
    json m = model_manifest(run, cfg);
    m["replicate_failures"] = 0;
    run.finish(m, json{{"pass", all_pass}, {"rel_tol", rel_tol}, {"max_violation_x", worst_x},
                       {"max_violation_y", worst_y}, {"report", "envelope_report.json"}});
    run.output().exit_code = all_pass ? kExitOk : kExitVerification;
    return run.output();
}

CommandOutput cmd_converge(const RunConfig& cfg, unsigned workers) {
    Run run("converge", cfg);
    // Study defaults unless the config sets the key explicitly.
    auto is_set = [&](const char* key) { return cfg.origin.count(key) > 0; };
    ConvergenceConfig cc;
    if (is_set("r1")) cc.r = cfg.params.r1;
    if (is_set("alpha1")) cc.alpha = cfg.params.alpha1;
    if (is_set("x0")) cc.x0 = cfg.params.x0;
    if (is_set("replicates")) cc.n_paths = cfg.replicates;
    cc.horizon = kConvergeHorizon;
    cc.coarsest_level = kConvergeCoarsestLevel;
    cc.finest_level = kConvergeFinestLevel;
    cc.seed = cfg.seed;
    cc.workers = workers;
    const ConvergenceStudy st = strong_order_study(cc);

    std::string csv = "dt,err_euler_maruyama,err_milstein,err_log_euler\n";
    for (const auto& lev : st.levels) {
        csv += format_double(lev.dt) + ',' + format_double(lev.err_euler) + ',' + format_double(lev.err_milstein) +
               ',' + format_double(lev.err_log_euler) + '\n';
    }
    const json doc{{"r", st.r},
                   {"alpha", st.alpha},
                   {"x0", st.x0},
                   {"horizon", st.horizon},
                   {"n_paths", st.n_paths},
                   {"slope_euler_maruyama", st.slope_euler},
                   {"slope_milstein", st.slope_milstein},
                   {"euler_maruyama_window", pair(kEulerSlopeLo, kEulerSlopeHi)},
                   {"milstein_window", pair(kMilsteinSlopeLo, kMilsteinSlopeHi)},
                   {"log_euler_max_rel_error", st.log_euler_max_rel_error},
                   {"log_euler_tolerance", kLogEulerExactTol},
                   {"pass", st.pass}};
    run.write("convergence.csv", csv);
    run.write_json("convergence.json", doc);
    json m = run.manifest_base();
    m["assumptions"] = json::array({"geometric reduction b = eps = 0, K = 1",
                                    "r1, alpha1, x0 and replicates (path count) override r = 2, alpha = 1, x0 = 1, "
                                    "50 paths only when set explicitly",
                                    "horizon 1, dt = 2^-4 .. 2^-10 by coarsening one fine path per replicate"});
    m["replicate_failures"] = 0;
    run.finish(m, doc);
    run.output().exit_code = st.pass ? kExitOk : kExitVerification;
    return run.output();
}

CommandOutput cmd_figure(const RunConfig& cfg) {
    Run run("figure", cfg);
    const std::size_t n_steps = grid_steps(kFigureHorizon, cfg.dt);
    const double t_burn = kFigureHorizon / 4.0;
    json panels = json::array();
    for (const FigurePanel& panel : kFigurePanels) {
        const ModelParams p = preset_params(panel.alpha1, panel.alpha2);
        const BrownianPath path = generate_path(cfg.seed, 0, cfg.dt, n_steps);
        const Trajectory traj = simulate(p, cfg.scheme, path);
        const std::string file = std::string("figure_") + panel.name + ".csv";
        run.write(file, trajectory_csv(traj));

        const RegimeClassification c = classify(p);
        const PathStats st = path_stats(traj, t_burn);
        const Regime observed = empirical_outcome(st);
        json pj{{"panel", std::string(1, panel.name)},
                {"alpha1", panel.alpha1},
                {"alpha2", panel.alpha2},
                {"file", file},
                {"classification", classification_json(c)},
                {"terminal", pair(st.x_end, st.y_end)},
                {"time_avg", pair(st.time_avg_x, st.time_avg_y)},
                {"log_growth", pair(st.log_growth_x, st.log_growth_y)},
                {"empirical_outcome", std::string(to_string(observed))},
                {"clamp_count", traj.clamp_count}};
        pj["concordant"] = c.tag == Regime::Boundary ? json(nullptr) : json(observed == c.tag);
        if (panel.alpha1 == 0.0 && panel.alpha2 == 0.0) {
            const EquilibriumSet eq = equilibria(p);
            pj["e_star"] = pair(eq.e_star);
            pj["terminal_distance"] = std::max(std::abs(st.x_end - eq.e_star.x), std::abs(st.y_end - eq.e_star.y));
        }
        panels.push_back(pj);
    }
    const json summary{{"t_end", kFigureHorizon}, {"t_burn", t_burn}, {"panels", panels}};
    run.write_json("figure_summary.json", summary);
    json m = run.manifest_base();
    m["assumptions"] = json::array({"x0 = y0 = 0.5", "t_end = 200", "all panels share stream 0 of the seed"});
    json analytic = json::array();
    for (const FigurePanel& panel : kFigurePanels) {
        const ModelParams p = preset_params(panel.alpha1, panel.alpha2);
        analytic.push_back(json{{"panel", std::string(1, panel.name)},
                                {"classification", classification_json(classify(p))},
                                {"analytic", analytic_json(p, cfg.k_list)}});
    }
    m["panels"] = analytic;
    m["replicate_failures"] = 0;
    run.finish(m, summary);
    return run.output();
}

}  // namespace

std::span<const std::string_view> command_names() { return kCommands; }

CommandOutput run_command(std::string_view command, const RunConfig& cfg, unsigned workers) {
    validate(cfg);
    if (command == "classify") return cmd_classify(cfg);
    if (command == "equilibria") return cmd_equilibria(cfg);
    if (command == "simulate") return cmd_simulate(cfg);
    if (command == "ensemble") return cmd_ensemble(cfg, workers);
    if (command == "verify_envelopes") return cmd_verify_envelopes(cfg);
    if (command == "converge") return cmd_converge(cfg, workers);
    if (command == "figure") return cmd_figure(cfg);
    throw Error(ErrorCode::InvalidArgument, "unknown command '" + std::string(command) + "'");
}

}  // namespace mutsim
