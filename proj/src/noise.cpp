#include "mutsim/noise.hpp"

#include <cmath>
#include <string>

#include "mutsim/error.hpp"

namespace mutsim {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

inline Philox4x32::Counter philox_round(const Philox4x32::Counter& c, const Philox4x32::Key& k) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter counter, Key key) {
    counter = philox_round(counter, key);
    for (int round = 1; round < 10; ++round) {
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
        counter = philox_round(counter, key);
    }
    return counter;
}

double open_uniform(std::uint32_t hi, std::uint32_t lo) {
    // 52 bits plus a half-ulp offset: the largest value 1 - 2^-53 is still below 1.
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 12;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -HUGE_VAL;
        if (p == 1.0) return HUGE_VAL;
        return std::nan("");
    }
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r + 6.7265770927008700853e+4) * r +
                 4.5921953931549871457e+4) * r + 1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
              1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
        const double den =
            (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r + 3.9307895800092710610e+4) * r +
                 2.1213794301586595867e+4) * r + 5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
              4.2313330701600911252e+1) * r + 1.0);
        return q * num / den;
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r + 2.41780725177450611770e-1) * r +
                 1.27045825245236838258e+0) * r + 3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r + 1.51986665636164571966e-2) * r +
                 1.48103976427480074590e-1) * r + 6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
        value = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 1.24266094738807843860e-3) * r +
                 2.65321895265761230930e-2) * r + 2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r + 1.84631831751005468180e-5) * r +
                 7.86869131145613259100e-4) * r + 1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        value = num / den;
    }
    return q < 0.0 ? -value : value;
}

double keyed_normal(std::uint64_t seed, std::uint32_t stream_id, std::uint32_t component, std::uint64_t index) {
    const Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                                  stream_id, component};
    const auto out = Philox4x32::block(ctr, key);
    return normal_quantile(open_uniform(out[0], out[1]));
}

std::vector<double> brownian_values(std::span<const double> increments) {
    std::vector<double> w(increments.size() + 1, 0.0);
    for (std::size_t k = 0; k < increments.size(); ++k) w[k + 1] = w[k] + increments[k];
    return w;
}

BrownianPath generate_path(std::uint64_t seed, std::uint32_t stream_id, double dt, std::size_t n_steps) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw Error(ErrorCode::InvalidArgument, "generate_path: dt must be finite and > 0");
    }
    BrownianPath path;
    path.dt = dt;
    path.n_steps = n_steps;
    path.seed = seed;
    path.stream_id = stream_id;
    path.inc1.resize(n_steps);
    path.inc2.resize(n_steps);
    const double scale = std::sqrt(dt);
    for (std::size_t k = 0; k < n_steps; ++k) {
        path.inc1[k] = scale * keyed_normal(seed, stream_id, 1, k);
        path.inc2[k] = scale * keyed_normal(seed, stream_id, 2, k);
    }
    return path;
}

BrownianPath coarsen(const BrownianPath& path, std::size_t factor) {
    if (factor == 0 || path.n_steps % factor != 0) {
        throw Error(ErrorCode::NonDivisible, "coarsen: factor " + std::to_string(factor) +
                                                 " does not divide n_steps " + std::to_string(path.n_steps));
    }
    BrownianPath out;
    out.dt = path.dt * static_cast<double>(factor);
    out.n_steps = path.n_steps / factor;
    out.seed = path.seed;
    out.stream_id = path.stream_id;
    out.inc1.assign(out.n_steps, 0.0);
    out.inc2.assign(out.n_steps, 0.0);
    for (std::size_t k = 0; k < out.n_steps; ++k) {
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t j = k * factor; j < (k + 1) * factor; ++j) {
            s1 += path.inc1[j];
            s2 += path.inc2[j];
        }
        out.inc1[k] = s1;
        out.inc2[k] = s2;
    }
    return out;
}

}  // namespace mutsim
