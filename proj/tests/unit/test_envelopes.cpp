#include <doctest.h>

#include <cmath>

#include "mutsim/envelopes.hpp"
#include "mutsim/error.hpp"
#include "mutsim/integrate.hpp"
#include "mutsim/model.hpp"
#include "mutsim/noise.hpp"

using namespace mutsim;

namespace {

// Classical RK4 for z' = z (r - a z).
double logistic_rk4(double r, double a, double z0, double t_end, int n) {
    const double h = t_end / n;
    auto f = [&](double z) { return z * (r - a * z); };
    double z = z0;
    for (int i = 0; i < n; ++i) {
        const double k1 = f(z);
        const double k2 = f(z + 0.5 * h * k1);
        const double k3 = f(z + 0.5 * h * k2);
        const double k4 = f(z + h * k3);
        z += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return z;
}

double max_step_residual(double r, double damp, double alpha, const BrownianPath& path) {
    const auto z = stochastic_logistic_exact(r, damp, alpha, 0.5, path.inc1, path.dt);
    double worst = 0.0;
    for (std::size_t k = 0; k < path.n_steps; ++k) {
        const double dw = path.inc1[k];
        const double next = z[k] + z[k] * (r - damp * z[k]) * path.dt + alpha * z[k] * dw +
                            0.5 * alpha * alpha * z[k] * (dw * dw - path.dt);
        worst = std::max(worst, std::abs(next - z[k + 1]) / z[k + 1]);
    }
    return worst;
}

}  // namespace

TEST_CASE("closed form without noise") {
    const std::vector<double> zeros(1000, 0.0);
    SUBCASE("pure growth") {
        const auto z = stochastic_logistic_exact(1.2, 0.0, 0.0, 0.5, zeros, 0.01);
        for (std::size_t k = 0; k < z.size(); ++k) {
            const double exact = 0.5 * std::exp(1.2 * 0.01 * k);
            CHECK(std::abs(z[k] - exact) <= 1e-13 * exact);
        }
    }
    SUBCASE("logistic against RK4") {
        const std::vector<double> fine(100000, 0.0);
        const auto z = stochastic_logistic_exact(1.2, 0.8, 0.0, 0.5, fine, 1e-4);
        const double ref = logistic_rk4(1.2, 0.8, 0.5, 10.0, 100000);
        CHECK(std::abs(z.back() - ref) <= 1e-8 * ref);
        const auto mid = stochastic_logistic_exact(1.2, 0.8, 0.0, 0.5, std::span(fine).first(20000), 1e-4);
        const double ref_mid = logistic_rk4(1.2, 0.8, 0.5, 2.0, 20000);
        CHECK(std::abs(mid.back() - ref_mid) <= 1e-8 * ref_mid);
    }
    SUBCASE("arguments") {
        CHECK_THROWS_AS(stochastic_logistic_exact(1.0, 1.0, 0.0, 0.0, zeros, 0.01), Error);
        CHECK_THROWS_AS(stochastic_logistic_exact(1.0, 1.0, 0.0, 1.0, zeros, 0.0), Error);
    }
}

TEST_CASE("closed form is consistent with its SDE") {
    const BrownianPath fine = generate_path(42, 0, 1.0 / 4096, 4096);
    const double coarse = max_step_residual(1.2, 0.8, 0.5, coarsen(fine, 4));
    const double mid = max_step_residual(1.2, 0.8, 0.5, coarsen(fine, 2));
    const double finest = max_step_residual(1.2, 0.8, 0.5, fine);
    CHECK(mid < 0.75 * coarse);
    CHECK(finest < 0.75 * mid);
    CHECK(finest < 1e-3);
}

TEST_CASE("build_envelopes") {
    SUBCASE("b = 0 collapses the pairs") {
        ModelParams p = preset_params(0.5, 0.5);
        p.b1 = p.b2 = 0.0;
        const EnvelopeSet env = build_envelopes(p, generate_path(1, 0, 0.01, 500));
        CHECK(env.lam_hi == env.lam_lo);
        CHECK(env.th_hi == env.th_lo);
    }
    SUBCASE("ordering holds exactly, long horizons included") {
        for (auto [a1, a2] : {std::pair{0.01, 0.01}, {0.1, 1.6}, {2.2, 1.8}, {2.2, 0.01}}) {
            for (std::uint32_t stream = 0; stream < 5; ++stream) {
                const EnvelopeSet env = build_envelopes(preset_params(a1, a2), generate_path(42, stream, 0.01, 20000));
                for (std::size_t k = 0; k < env.times.size(); ++k) {
                    CHECK(env.lam_lo[k] <= env.lam_hi[k]);
                    CHECK(env.th_lo[k] <= env.th_hi[k]);
                    CHECK(env.lam_lo[k] > 0.0);
                    CHECK(env.th_lo[k] > 0.0);
                }
            }
        }
    }
    SUBCASE("monotone in z0") {
        const BrownianPath path = generate_path(8, 1, 0.01, 3000);
        const auto a = stochastic_logistic_exact(1.0, 0.7, 1.1, 0.5, path.inc1, path.dt);
        const auto b = stochastic_logistic_exact(1.0, 0.7, 1.1, 1.0, path.inc1, path.dt);
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(b[k] >= a[k]);
    }
}

TEST_CASE("check_sandwich") {
    const ModelParams p = preset_params(0.01, 0.01);
    const BrownianPath path = generate_path(42, 0, 0.001, 10000);
    const EnvelopeSet env = build_envelopes(p, path);
    SUBCASE("log Euler and Milstein on the same path pass") {
        for (SchemeId s : {SchemeId::LogEuler, SchemeId::Milstein}) {
            const SandwichReport r = check_sandwich(simulate(p, s, path), env, 10 * path.dt);
            CHECK(r.pass);
            CHECK(r.x.max_violation == 0.0);
            CHECK_FALSE(r.x.first_violation.has_value());
        }
    }
    SUBCASE("envelope fed back as the trajectory") {
        Trajectory t = simulate(p, SchemeId::LogEuler, path);
        t.xs = env.lam_hi;
        t.ys = env.th_hi;
        const SandwichReport r = check_sandwich(t, env, 0.0);
        CHECK(r.pass);
        CHECK(r.x.upper_slack == 0.0);
        CHECK(r.y.upper_slack == 0.0);
    }
    SUBCASE("envelopes from another path are flagged") {
        const ModelParams q = preset_params(1.0, 1.0);
        const BrownianPath mine = generate_path(42, 0, 0.001, 10000);
        const BrownianPath other = generate_path(43, 0, 0.001, 10000);
        const SandwichReport r = check_sandwich(simulate(q, SchemeId::LogEuler, mine), build_envelopes(q, other), 0.01);
        CHECK_FALSE(r.pass);
        CHECK(r.x.max_violation + r.y.max_violation > 0.0);
        CHECK((r.x.first_violation.has_value() || r.y.first_violation.has_value()));
    }
    SUBCASE("grid mismatch") {
        const Trajectory t = simulate(p, SchemeId::LogEuler, generate_path(42, 0, 0.001, 9999));
        try {
            check_sandwich(t, env, 0.01);
            FAIL("no throw");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::GridMismatch);
        }
    }
}
