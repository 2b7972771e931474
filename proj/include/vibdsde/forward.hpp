#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vibdsde/coefficients.hpp"
#include "vibdsde/domain.hpp"
#include "vibdsde/noise.hpp"

namespace vibdsde {

// Batch of reflected Euler trajectories, structure-of-arrays:
// x[(k*dim + j)*M + m], da[k*M + m]. Nodes k <= start_index hold the frozen
// extension X = x0, A = 0.
struct ForwardPaths {
    TimeGrid grid;
    std::size_t n_paths = 0;
    int dim = 1;
    int start_index = 0;
    std::vector<double> x;   // (N+1) * dim * M
    std::vector<double> da;  // N * M, projection displacement per step

    std::span<const double> coord(int k, int j) const {
        return {x.data() + (static_cast<std::size_t>(k) * dim + j) * n_paths, n_paths};
    }
    std::span<const double> da_step(int k) const {
        return {da.data() + static_cast<std::size_t>(k) * n_paths, n_paths};
    }
    double x_at(std::size_t m, int k, int j) const { return coord(k, j)[m]; }
    // A_k by prefix sum of the step increments
    double a_at(std::size_t m, int k) const;
    bool contact(std::size_t m, int k) const { return k > 0 && da_step(k - 1)[m] > 0.0; }
};

ForwardPaths simulate_forward(const DomainSpec& dom, const CoefficientSet& coeffs,
                              std::span<const double> x0, const PathBundle& bundle,
                              int start_index, int threads = 1);

// Streaming per-node statistics for runs too large to materialize.
struct ForwardSummary {
    TimeGrid grid;
    int dim = 1;
    std::vector<double> mean_x;           // (N+1) * dim
    std::vector<double> var_x1;           // (N+1), first coordinate
    std::vector<double> mean_a;           // (N+1)
    std::vector<double> contact_fraction; // (N+1)
    double mean_a_final = 0.0;
    double min_phi = 0.0;                 // over all paths and nodes
    std::size_t containment_violations = 0;  // phi < -kProjectionTol
};

ForwardSummary forward_summary(const DomainSpec& dom, const CoefficientSet& coeffs,
                               std::span<const double> x0, const PathBundle& bundle,
                               int start_index, int threads = 1);

}  // namespace vibdsde
