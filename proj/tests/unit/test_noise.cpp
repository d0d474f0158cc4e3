#include <doctest.h>

#include <cmath>
#include <limits>

#include "mutsim/error.hpp"
#include "mutsim/noise.hpp"

using namespace mutsim;

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("open_uniform stays inside (0, 1)") {
    CHECK(open_uniform(0, 0) > 0.0);
    CHECK(open_uniform(0xffffffff, 0xffffffff) < 1.0);
    CHECK(open_uniform(0x80000000, 0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("normal_quantile against reference values") {
    // reference: scipy.stats.norm.ppf
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-15));
    CHECK(normal_quantile(0.001) == doctest::Approx(-3.090232306167813).epsilon(1e-15));
    CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-14));
    CHECK(normal_quantile(0.3) == doctest::Approx(-0.5244005127080409).epsilon(1e-15));
    CHECK(normal_quantile(0.9999999) == doctest::Approx(5.199337582290661).epsilon(1e-14));
    CHECK(normal_quantile(0.2) == doctest::Approx(-normal_quantile(0.8)).epsilon(1e-15));
    CHECK(std::isinf(normal_quantile(0.0)));
    CHECK(std::isnan(normal_quantile(1.5)));
}

TEST_CASE("generate_path") {
    SUBCASE("empty path") {
        const BrownianPath p = generate_path(42, 0, 0.001, 0);
        CHECK(p.inc1.empty());
        CHECK(p.inc2.empty());
        const auto w = brownian_values(p.inc1);
        REQUIRE(w.size() == 1);
        CHECK(w[0] == 0.0);
    }
    SUBCASE("bitwise reproducible") {
        const BrownianPath a = generate_path(42, 0, 0.001, 1000);
        const BrownianPath b = generate_path(42, 0, 0.001, 1000);
        CHECK(a.inc1 == b.inc1);
        CHECK(a.inc2 == b.inc2);
        CHECK(a.inc1.size() == 1000);
        CHECK(a.inc2.size() == 1000);
        CHECK(a.seed == 42);
    }
    SUBCASE("streams and seeds differ") {
        const BrownianPath a = generate_path(42, 0, 0.001, 16);
        CHECK(a.inc1 != generate_path(42, 1, 0.001, 16).inc1);
        CHECK(a.inc1 != generate_path(43, 0, 0.001, 16).inc1);
        CHECK(a.inc1 != a.inc2);
    }
    SUBCASE("prefix of a longer path") {
        const BrownianPath a = generate_path(7, 3, 0.01, 10);
        const BrownianPath b = generate_path(7, 3, 0.01, 100);
        for (std::size_t k = 0; k < 10; ++k) CHECK(a.inc1[k] == b.inc1[k]);
    }
    SUBCASE("bad dt") {
        CHECK_THROWS_AS(generate_path(1, 0, 0.0, 5), Error);
        CHECK_THROWS_AS(generate_path(1, 0, -1.0, 5), Error);
        CHECK_THROWS_AS(generate_path(1, 0, std::numeric_limits<double>::infinity(), 5), Error);
    }
}

TEST_CASE("increment moments over 10^6 draws") {
    const double dt = 0.001;
    const std::size_t n = 1'000'000;
    const BrownianPath p = generate_path(42, 0, dt, n);
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        m1 += p.inc1[k];
        m2 += p.inc2[k];
    }
    m1 /= n;
    m2 /= n;
    double v1 = 0.0, v2 = 0.0, c = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        v1 += (p.inc1[k] - m1) * (p.inc1[k] - m1);
        v2 += (p.inc2[k] - m2) * (p.inc2[k] - m2);
        c += (p.inc1[k] - m1) * (p.inc2[k] - m2);
    }
    const double corr = c / std::sqrt(v1 * v2);
    v1 /= (n - 1);
    v2 /= (n - 1);
    CHECK(std::abs(m1) <= 4.0 * std::sqrt(dt / n));
    CHECK(std::abs(m2) <= 4.0 * std::sqrt(dt / n));
    CHECK(std::abs(v1 - dt) <= 0.01 * dt);
    CHECK(std::abs(v2 - dt) <= 0.01 * dt);
    CHECK(std::abs(corr) <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("coarsen") {
    const BrownianPath fine = generate_path(42, 5, 1.0 / 1024, 1024);
    SUBCASE("identity") {
        const BrownianPath same = coarsen(fine, 1);
        CHECK(same.inc1 == fine.inc1);
        CHECK(same.inc2 == fine.inc2);
        CHECK(same.dt == fine.dt);
    }
    SUBCASE("single block telescopes to W(t_end)") {
        const BrownianPath one = coarsen(fine, 1024);
        REQUIRE(one.n_steps == 1);
        CHECK(one.inc1[0] == doctest::Approx(brownian_values(fine.inc1).back()).epsilon(1e-12));
        CHECK(one.dt == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("shared grid points agree") {
        const BrownianPath c = coarsen(fine, 8);
        const auto wf = brownian_values(fine.inc2);
        const auto wc = brownian_values(c.inc2);
        for (std::size_t j = 0; j < wc.size(); ++j) {
            CHECK(std::abs(wc[j] - wf[j * 8]) <= 1e-12 * std::max(1.0, std::abs(wf[j * 8])));
        }
    }
    SUBCASE("composition") {
        const BrownianPath ab = coarsen(coarsen(fine, 4), 8);
        const BrownianPath direct = coarsen(fine, 32);
        REQUIRE(ab.n_steps == direct.n_steps);
        const auto wa = brownian_values(ab.inc1);
        const auto wd = brownian_values(direct.inc1);
        for (std::size_t j = 0; j < wa.size(); ++j) {
            CHECK(std::abs(wa[j] - wd[j]) <= 1e-12 * std::max(1.0, std::abs(wd[j])));
        }
    }
    SUBCASE("non-divisible factor") {
        try {
            coarsen(fine, 3);
            FAIL("no throw");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NonDivisible);
        }
        CHECK_THROWS_AS(coarsen(fine, 0), Error);
    }
}
