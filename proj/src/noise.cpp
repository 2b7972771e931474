#include "vibdsde/noise.hpp"

#include <cmath>

#include "vibdsde/errors.hpp"

namespace vibdsde {

TimeGrid make_time_grid(double t0, double t_end, int n_steps) {
    if (!(t0 >= 0.0) || !(t0 < t_end))
        throw SolverError(ErrorCode::BadParameter, "time grid requires 0 <= t0 < T");
    if (n_steps < 1) throw SolverError(ErrorCode::BadParameter, "time grid requires N >= 1");
    return TimeGrid{t0, t_end, n_steps};
}

namespace {

constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;
constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;

inline void philox_round(std::uint32_t c[4], std::uint32_t k[2]) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t nc0 = hi1 ^ c[1] ^ k[0];
    const std::uint32_t nc2 = hi0 ^ c[3] ^ k[1];
    c[0] = nc0;
    c[1] = lo1;
    c[2] = nc2;
    c[3] = lo0;
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
}

}  // namespace

std::uint64_t philox_bits(std::uint64_t seed, std::uint32_t path_lo, std::uint32_t path_hi,
                          std::uint32_t step, std::uint32_t dim_and_stream) {
    std::uint32_t c[4] = {path_lo, path_hi, step, dim_and_stream};
    std::uint32_t k[2] = {static_cast<std::uint32_t>(seed),
                          static_cast<std::uint32_t>(seed >> 32)};
    for (int r = 0; r < 10; ++r) philox_round(c, k);
    return static_cast<std::uint64_t>(c[0]) | (static_cast<std::uint64_t>(c[1]) << 32);
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw SolverError(ErrorCode::BadParameter, "inverse_normal_cdf requires p in (0,1)");
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                  6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
              1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return q * num / den;
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        val = num / den;
    }
    return (q < 0.0) ? -val : val;
}

double standard_normal(std::uint64_t seed, std::uint64_t path, std::uint32_t step,
                       std::uint32_t dim, std::uint32_t stream) {
    const std::uint64_t bits =
        philox_bits(seed, static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32),
                    step, (stream << 16) | dim);
    // 53 mantissa bits, offset into open (0,1)
    const double u = static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
    return inverse_normal_cdf(u);
}

PathBundle::PathBundle(TimeGrid grid, std::size_t n_paths, int dim, std::uint64_t seed,
                       std::uint64_t scenario_seed)
    : grid_(grid), n_paths_(n_paths), dim_(dim), seed_(seed), scenario_seed_(scenario_seed) {
    if (n_paths < 1) throw SolverError(ErrorCode::BadParameter, "need at least one path");
    if (dim < 1) throw SolverError(ErrorCode::BadParameter, "dimension must be positive");
    const double sdt = std::sqrt(grid_.dt());
    backward_.resize(static_cast<std::size_t>(grid_.n_steps) + 1);
    backward_[0] = 0.0;
    for (int k = 0; k < grid_.n_steps; ++k)
        backward_[k + 1] = backward_[k] + sdt * standard_normal(scenario_seed_, 0,
                                                                static_cast<std::uint32_t>(k), 0, 1);
}

double PathBundle::dw(std::size_t path, int step, int dim) const {
    return std::sqrt(grid_.dt()) * standard_normal(seed_, path, static_cast<std::uint32_t>(step),
                                                   static_cast<std::uint32_t>(dim), 0);
}

void PathBundle::fill_dw_step(int step, int dim, std::span<double> out,
                              std::size_t first_path) const {
    const double sdt = std::sqrt(grid_.dt());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = sdt * standard_normal(seed_, first_path + i, static_cast<std::uint32_t>(step),
                                       static_cast<std::uint32_t>(dim), 0);
}

PathBundle sample_noise(const TimeGrid& grid, std::size_t n_paths, int dim, std::uint64_t seed) {
    return PathBundle(grid, n_paths, dim, seed);
}

}  // namespace vibdsde
