#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace vibdsde {

struct TimeGrid {
    double t0 = 0.0;
    double t_end = 1.0;
    int n_steps = 1;

    double dt() const { return (t_end - t0) / n_steps; }
    // node(n_steps) returns t_end exactly
    double node(int k) const { return k == n_steps ? t_end : t0 + k * dt(); }
};

TimeGrid make_time_grid(double t0, double t_end, int n_steps);

// Philox4x32-10 counter block cipher (Salmon et al. 2011). Each Gaussian
// draw is keyed by (seed) and countered by (path, step, dim, stream), so a
// path's noise never depends on the batch size or on evaluation order.
std::uint64_t philox_bits(std::uint64_t seed, std::uint32_t path_lo, std::uint32_t path_hi,
                          std::uint32_t step, std::uint32_t dim_and_stream);

// Wichura's AS 241 double-precision inverse normal CDF; the fixed choice of
// Gaussian sampler is part of the reproducibility contract.
double inverse_normal_cdf(double p);

double standard_normal(std::uint64_t seed, std::uint64_t path, std::uint32_t step,
                       std::uint32_t dim, std::uint32_t stream);

// Forward increments are generated on demand from the counter RNG (a
// 10^5 x 2000 batch would not fit in memory); the single backward path is
// materialized. Stream 0 feeds W, stream 1 feeds B.
class PathBundle {
  public:
    // scenario_seed keys the backward path; by default it equals seed, so a
    // single seed reproduces the whole bundle. The field builder passes a
    // separate scenario seed to fix B while varying W.
    PathBundle(TimeGrid grid, std::size_t n_paths, int dim, std::uint64_t seed,
               std::uint64_t scenario_seed);
    PathBundle(TimeGrid grid, std::size_t n_paths, int dim, std::uint64_t seed)
        : PathBundle(grid, n_paths, dim, seed, seed) {}

    const TimeGrid& grid() const { return grid_; }
    std::size_t n_paths() const { return n_paths_; }
    int dim() const { return dim_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t scenario_seed() const { return scenario_seed_; }

    // forward increment dW[m][k][j] ~ N(0, dt)
    double dw(std::size_t path, int step, int dim) const;
    // out[i] = dW[first_path + i][step][dim]
    void fill_dw_step(int step, int dim, std::span<double> out, std::size_t first_path = 0) const;

    const std::vector<double>& backward_path() const { return backward_; }
    double db(int step) const { return backward_[step + 1] - backward_[step]; }

  private:
    TimeGrid grid_;
    std::size_t n_paths_;
    int dim_;
    std::uint64_t seed_;
    std::uint64_t scenario_seed_;
    std::vector<double> backward_;
};

PathBundle sample_noise(const TimeGrid& grid, std::size_t n_paths, int dim, std::uint64_t seed);

}  // namespace vibdsde
