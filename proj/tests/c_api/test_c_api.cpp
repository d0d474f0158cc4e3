#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "mutsim/mutsim.h"

namespace fs = std::filesystem;

namespace {

std::string last_error() { return mutsim_last_error_json(); }

}  // namespace

TEST_CASE("version and name tables") {
    CHECK(std::string(mutsim_version()) == "1.0.0");
    REQUIRE(mutsim_config_key_count() == 21);
    CHECK(std::string(mutsim_config_key_name(0)) == "r1");
    CHECK(mutsim_config_key_name(21) == nullptr);
    REQUIRE(mutsim_command_count() == 7);
    CHECK(std::string(mutsim_command_name(4)) == "verify_envelopes");
}

TEST_CASE("config handle") {
    mutsim_config* cfg = nullptr;
    REQUIRE(mutsim_config_create(&cfg) == MUTSIM_OK);
    CHECK(mutsim_config_parse(cfg, "alpha1 = 0.1\nalpha2 = 1.6\n") == MUTSIM_OK);
    CHECK(mutsim_config_set(cfg, "t_end", "2") == MUTSIM_OK);
    CHECK(mutsim_config_validate(cfg) == MUTSIM_OK);
    const std::string text = mutsim_config_text(cfg);
    CHECK(text.find("alpha2 = 1.6\n") != std::string::npos);
    CHECK(text.find("t_burn = 0.5\n") != std::string::npos);

    CHECK(mutsim_config_set(cfg, "alpha1", "-1") == MUTSIM_VALIDATION);
    CHECK(last_error().find("\"error\":\"ConstraintViolation\"") != std::string::npos);
    CHECK(last_error().find("\"key\":\"alpha1\"") != std::string::npos);
    CHECK(mutsim_config_parse(cfg, "\nbogus = 1\n") == MUTSIM_VALIDATION);
    CHECK(last_error().find("\"line\":2") != std::string::npos);
    CHECK(mutsim_config_set(cfg, nullptr, "1") == MUTSIM_VALIDATION);

    mutsim_result* res = nullptr;
    CHECK(mutsim_run(cfg, "classify", 1, &res) == MUTSIM_OK);
    REQUIRE(res != nullptr);
    CHECK(std::string(mutsim_result_stdout(res)).find("YExtinctXPersistent") != std::string::npos);
    CHECK(mutsim_result_exit_code(res) == 0);
    CHECK(mutsim_result_file_count(res) == 0);
    mutsim_result_destroy(res);

    CHECK(mutsim_run(cfg, "nope", 1, &res) == MUTSIM_VALIDATION);
    CHECK(res == nullptr);
    mutsim_config_destroy(cfg);
}

TEST_CASE("run writes files") {
    const fs::path dir = fs::temp_directory_path() / "mutsim_c_api_run";
    fs::remove_all(dir);
    mutsim_config* cfg = nullptr;
    REQUIRE(mutsim_config_create(&cfg) == MUTSIM_OK);
    REQUIRE(mutsim_config_set(cfg, "out_dir", dir.string().c_str()) == MUTSIM_OK);
    REQUIRE(mutsim_config_set(cfg, "t_end", "1") == MUTSIM_OK);
    mutsim_result* res = nullptr;
    REQUIRE(mutsim_run(cfg, "simulate", 1, &res) == MUTSIM_OK);
    REQUIRE(mutsim_result_file_count(res) == 2);
    CHECK(fs::exists(mutsim_result_file(res, 0)));
    CHECK(fs::path(mutsim_result_file(res, 1)).filename() == "manifest.json");
    mutsim_result_destroy(res);

    REQUIRE(mutsim_config_set(cfg, "replicates", "2") == MUTSIM_OK);
    CHECK(mutsim_run(cfg, "simulate", 1, &res) == MUTSIM_VALIDATION);
    CHECK(last_error().find("replicates") != std::string::npos);
    mutsim_config_destroy(cfg);
    fs::remove_all(dir);
}

TEST_CASE("model functions") {
    const mutsim_params p = mutsim_preset_params(0.1, 1.6);
    mutsim_regime tag;
    double margins[2];
    REQUIRE(mutsim_classify(&p, &tag, margins) == MUTSIM_OK);
    CHECK(tag == MUTSIM_Y_EXTINCT_X_PERSISTENT);
    CHECK(margins[1] == doctest::Approx(-0.28));

    mutsim_equilibria eq;
    REQUIRE(mutsim_equilibria_solve(&p, 1e-10, &eq) == MUTSIM_OK);
    CHECK(eq.e_star.x == doctest::Approx(1.1626545658256747).epsilon(1e-12));
    CHECK(eq.newton_converged == 1);

    double h = 0.0;
    REQUIRE(mutsim_moment_bound(&p, 1.0, 1, &h) == MUTSIM_OK);
    CHECK(h == doctest::Approx(1.5125));
    CHECK(mutsim_moment_bound(&p, -1.0, 1, &h) == MUTSIM_VALIDATION);

    double lower[2], solo[2];
    REQUIRE(mutsim_persistence_limits(&p, lower, solo) == MUTSIM_OK);
    CHECK(lower[0] == doctest::Approx(1.0391304347826087));

    mutsim_params bad = p;
    bad.eps1 = 0.0;
    CHECK(mutsim_equilibria_solve(&bad, 1e-10, &eq) == MUTSIM_VALIDATION);
}

TEST_CASE("paths, trajectories and envelopes") {
    const mutsim_params p = mutsim_preset_params(0.01, 0.01);
    mutsim_path* fine = nullptr;
    REQUIRE(mutsim_path_generate(42, 0, 0.0005, 2000, &fine) == MUTSIM_OK);
    mutsim_path* path = nullptr;
    REQUIRE(mutsim_path_coarsen(fine, 2, &path) == MUTSIM_OK);
    CHECK(mutsim_path_steps(path) == 1000);
    CHECK(mutsim_path_dt(path) == doctest::Approx(0.001));
    CHECK(mutsim_path_increments(path, 1)[0] ==
          doctest::Approx(mutsim_path_increments(fine, 1)[0] + mutsim_path_increments(fine, 1)[1]));
    CHECK(mutsim_path_increments(path, 3) == nullptr);
    mutsim_path* bad = nullptr;
    CHECK(mutsim_path_coarsen(fine, 3, &bad) == MUTSIM_VALIDATION);
    CHECK(last_error().find("NonDivisible") != std::string::npos);
    CHECK(mutsim_path_generate(1, 0, -1.0, 10, &bad) == MUTSIM_VALIDATION);

    mutsim_trajectory* traj = nullptr;
    REQUIRE(mutsim_simulate(&p, MUTSIM_LOG_EULER, path, &traj) == MUTSIM_OK);
    CHECK(mutsim_trajectory_length(traj) == 1001);
    CHECK(mutsim_trajectory_x(traj)[0] == 0.5);
    CHECK(mutsim_trajectory_times(traj)[1000] == doctest::Approx(1.0));
    CHECK(mutsim_trajectory_clamps(traj) == 0);

    mutsim_envelopes* env = nullptr;
    REQUIRE(mutsim_envelopes_build(&p, path, &env) == MUTSIM_OK);
    mutsim_sandwich s;
    REQUIRE(mutsim_check_sandwich(traj, env, 0.01, &s) == MUTSIM_OK);
    CHECK(s.pass == 1);
    CHECK(s.first_violation_x == -1);

    mutsim_envelopes* env_fine = nullptr;
    REQUIRE(mutsim_envelopes_build(&p, fine, &env_fine) == MUTSIM_OK);
    CHECK(mutsim_check_sandwich(traj, env_fine, 0.01, &s) == MUTSIM_VALIDATION);
    CHECK(last_error().find("GridMismatch") != std::string::npos);

    mutsim_envelopes_destroy(env_fine);
    mutsim_envelopes_destroy(env);
    mutsim_trajectory_destroy(traj);
    mutsim_path_destroy(path);
    mutsim_path_destroy(fine);
}

TEST_CASE("numerical failures map to status 2") {
    mutsim_params p = mutsim_preset_params(0.0, 0.0);
    p.r1 = 1e305;
    p.x0 = 1e10;
    mutsim_path* path = nullptr;
    REQUIRE(mutsim_path_generate(1, 0, 1.0, 2, &path) == MUTSIM_OK);
    mutsim_trajectory* traj = nullptr;
    CHECK(mutsim_simulate(&p, MUTSIM_MILSTEIN, path, &traj) == MUTSIM_NUMERICAL);
    CHECK(last_error().find("Overflow") != std::string::npos);
    CHECK(mutsim_simulate(&p, static_cast<mutsim_scheme>(9), path, &traj) == MUTSIM_VALIDATION);
    mutsim_path_destroy(path);
}
