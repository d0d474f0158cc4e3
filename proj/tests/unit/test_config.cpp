#include <doctest.h>

#include <charconv>
#include <cmath>

#include "mutsim/config.hpp"
#include "mutsim/error.hpp"
#include "mutsim/format.hpp"

using namespace mutsim;

namespace {

Error error_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e;
    }
    FAIL("expected mutsim::Error");
    return Error(ErrorCode::Io, "");
}

constexpr const char* kPresetText = R"(# preset constants, weak noise
r1 = 1.2
r2 = 1
b1 = 0.7
b2 = 0.9
k1 = 2
k2 = 2
eps1 = 0.8
eps2 = 0.7
alpha1 = 0.01   # weak noise
alpha2 = 0.01
x0 = 0.5
y0 = 0.5
)";

}  // namespace

TEST_CASE("keys") {
    const auto keys = config_keys();
    CHECK(keys.size() == 21);
    CHECK(keys.front() == "r1");
    CHECK(keys.back() == "out_dir");
}

TEST_CASE("parse_config") {
    SUBCASE("full preset set") {
        const RunConfig c = parse_config(kPresetText);
        CHECK(c.params.r1 == 1.2);
        CHECK(c.params.b2 == 0.9);
        CHECK(c.params.alpha1 == 0.01);
        CHECK(c.origin.at("alpha1") == 10);
        CHECK_NOTHROW(validate(c));
    }
    SUBCASE("empty file plus flags") {
        RunConfig c = parse_config("");
        apply_setting(c, "alpha1", "0.1", 0);
        apply_setting(c, "alpha2", "1.6", 0);
        apply_setting(c, "k_list", "1, 2.5", 0);
        apply_setting(c, "scheme", "log_euler", 0);
        apply_setting(c, "seed", "7", 0);
        CHECK(c.params.alpha2 == 1.6);
        CHECK(c.k_list == std::vector<double>{1.0, 2.5});
        CHECK(c.scheme == SchemeId::LogEuler);
        CHECK(c.seed == 7);
        CHECK(c.dt == 0.001);
        CHECK(c.burn_in() == 50.0);
    }
    SUBCASE("flags override file values") {
        RunConfig c = parse_config("alpha1 = 0.2\n");
        apply_setting(c, "alpha1", "0.3", 0);
        CHECK(c.params.alpha1 == 0.3);
        CHECK(c.origin.at("alpha1") == 0);
    }
    SUBCASE("comments, blanks, CRLF") {
        const RunConfig c = parse_config("\r\n  # nothing\r\nt_end = 10 \r\n\r\n");
        CHECK(c.t_end == 10.0);
    }
}

TEST_CASE("config errors name key and line") {
    SUBCASE("negative alpha") {
        const Error e = error_of([] { parse_config("r1 = 1.2\nalpha1 = -1\n"); });
        CHECK(e.code() == ErrorCode::ConstraintViolation);
        CHECK(e.key() == "alpha1");
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    SUBCASE("unknown key") {
        const Error e = error_of([] { parse_config("\n\nalpah1 = 0.1\n"); });
        CHECK(e.code() == ErrorCode::UnknownKey);
        CHECK(e.key() == "alpah1");
        CHECK(e.line() == 3);
    }
    SUBCASE("malformed value") {
        const Error e = error_of([] { parse_config("dt = fast\n"); });
        CHECK(e.code() == ErrorCode::MalformedValue);
        CHECK(e.key() == "dt");
        CHECK(error_of([] { parse_config("scheme = rk4\n"); }).code() == ErrorCode::MalformedValue);
        CHECK(error_of([] { parse_config("seed = -3\n"); }).code() == ErrorCode::MalformedValue);
        CHECK(error_of([] { parse_config("k_list = 1,,2\n"); }).code() == ErrorCode::MalformedValue);
        CHECK(error_of([] { parse_config("r1 = nan\n"); }).code() == ErrorCode::MalformedValue);
        CHECK(error_of([] { parse_config("r1\n"); }).code() == ErrorCode::MalformedValue);
    }
    SUBCASE("flag errors mention the command line") {
        RunConfig c;
        const Error e = error_of([&] { apply_setting(c, "epsilon", "1.5", 0); });
        CHECK(e.code() == ErrorCode::ConstraintViolation);
        CHECK(std::string(e.what()).find("command line") != std::string::npos);
        CHECK(error_of([&] { apply_setting(c, "replicates", "0", 0); }).code() == ErrorCode::ConstraintViolation);
    }
    SUBCASE("cross-field checks") {
        RunConfig c = parse_config("dt = 0.3\nt_end = 1\n");
        Error e = error_of([&] { validate(c); });
        CHECK(e.code() == ErrorCode::ConstraintViolation);
        CHECK(e.key() == "t_end");
        CHECK(e.line() == 2);
        c = parse_config("# only dt\ndt = 0.3\n");
        e = error_of([&] { validate(c); });
        CHECK(e.key() == "dt");
        CHECK(e.line() == 2);
        c = parse_config("t_end = 10\nt_burn = 10\n");
        e = error_of([&] { validate(c); });
        CHECK(e.key() == "t_burn");
    }
    SUBCASE("to_json") {
        const Error e = error_of([] { parse_config("bogus = 1\n"); });
        CHECK(e.to_json() == R"js({"error":"UnknownKey","message":"unknown key 'bogus' (line 1)","key":"bogus","line":1})js");
    }
}

TEST_CASE("config text round-trips") {
    RunConfig c = parse_config(kPresetText);
    apply_setting(c, "dt", "0.0005", 0);
    apply_setting(c, "k_list", "0.5,1,3", 0);
    apply_setting(c, "alpha2", "0.1", 0);
    const std::string text = to_config_text(c);
    const RunConfig back = parse_config(text);
    CHECK(to_config_text(back) == text);
    CHECK(back.params.alpha2 == c.params.alpha2);
    CHECK(back.dt == c.dt);
    CHECK(back.k_list == c.k_list);
    CHECK(back.burn_in() == c.burn_in());
}

TEST_CASE("number formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_shortest(0.1) == "0.1");
    CHECK(format_shortest(1e-300) == "1e-300");
    for (double v : {0.1, 1.0 / 3.0, 1.1626545658256747, 6.02e23, -2.5e-7, 0.0}) {
        for (const std::string& s : {format_double(v), format_shortest(v)}) {
            double back = 0.0;
            std::from_chars(s.data(), s.data() + s.size(), back);
            CHECK(back == v);
        }
    }
}
