// mutsim: command-line front end over the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mutsim/mutsim.h"

namespace {

void print_error(const std::string& error, const std::string& message) {
    std::cerr << nlohmann::ordered_json{{"error", error}, {"message", message}}.dump() << '\n';
}

int report_status(mutsim_status s) {
    std::cerr << mutsim_last_error_json() << '\n';
    return s == MUTSIM_INTERNAL ? MUTSIM_NUMERICAL : static_cast<int>(s);
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct ConfigHandle {
    mutsim_config* ptr = nullptr;
    ~ConfigHandle() { mutsim_config_destroy(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic mutualism simulator", "mutsim"};
    app.set_version_flag("--version", std::string(mutsim_version()));
    app.require_subcommand(1);

    std::string config_path;
    unsigned workers = 1;
    std::map<std::string, std::string> overrides;

    std::vector<std::string> keys;
    for (size_t i = 0; i < mutsim_config_key_count(); ++i) keys.emplace_back(mutsim_config_key_name(i));

    std::vector<std::string> commands;
    for (size_t i = 0; i < mutsim_command_count(); ++i) commands.emplace_back(mutsim_command_name(i));

    const std::map<std::string, std::string> blurbs{
        {"classify", "print the regime tag and noise margins"},
        {"equilibria", "solve for the boundary and interior equilibria"},
        {"simulate", "integrate one trajectory to trajectory.csv"},
        {"ensemble", "run replicates and compare moments, quantiles and regimes"},
        {"verify_envelopes", "check trajectories against the closed-form envelopes"},
        {"converge", "measure strong convergence orders on the geometric reduction"},
        {"figure", "run the four preset panels a-d"},
    };

    std::string chosen;
    for (const std::string& cmd : commands) {
        const auto blurb = blurbs.find(cmd);
        CLI::App* sub = app.add_subcommand(cmd, blurb == blurbs.end() ? cmd : blurb->second);
        std::string dashed = cmd;
        for (char& c : dashed) c = c == '_' ? '-' : c;
        if (dashed != cmd) sub->alias(dashed);
        sub->add_option("-c,--config", config_path, "key = value config file");
        sub->add_option("-w,--workers", workers, "replicate worker threads (0 = all cores)");
        for (const std::string& key : keys) {
            sub->add_option_function<std::string>(
                "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; }, "override " + key);
        }
        sub->callback([&chosen, cmd] { chosen = cmd; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("InvalidArgument", e.what());
        return MUTSIM_VALIDATION;
    }

    ConfigHandle cfg;
    if (mutsim_status s = mutsim_config_create(&cfg.ptr); s != MUTSIM_OK) return report_status(s);

    if (!config_path.empty()) {
        const auto text = read_file(config_path);
        if (!text) {
            print_error("Io", "cannot read config file '" + config_path + "'");
            return MUTSIM_VALIDATION;
        }
        if (mutsim_status s = mutsim_config_parse(cfg.ptr, text->c_str()); s != MUTSIM_OK) return report_status(s);
    }
    for (const auto& [key, value] : overrides) {
        if (mutsim_status s = mutsim_config_set(cfg.ptr, key.c_str(), value.c_str()); s != MUTSIM_OK) {
            return report_status(s);
        }
    }

    mutsim_result* res = nullptr;
    const mutsim_status s = mutsim_run(cfg.ptr, chosen.c_str(), workers, &res);
    if (!res) return report_status(s);
    std::fputs(mutsim_result_stdout(res), stdout);
    const int code = mutsim_result_exit_code(res);
    mutsim_result_destroy(res);
    return code;
}
