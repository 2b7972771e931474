#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vibdsde/convex.hpp"
#include "vibdsde/errors.hpp"
#include "vibdsde/forward.hpp"
#include "vibdsde/noise.hpp"

namespace vibdsde {

// Per-step variational operator selection. Resolvent applies the exact
// proximal maps; Yosida replaces them by the smoothed gradients and solves
// the monotone scalar equation.
struct ConstraintMode {
    bool yosida = false;
    double eps = 0.1;
};

struct SolverConfig {
    enum class Mode { Resolvent, Yosida, Picard };

    Mode mode = Mode::Resolvent;
    double yosida_eps = 0.1;
    // Picard outer loop
    Mode picard_inner = Mode::Resolvent;
    double picard_inner_eps = 0.1;
    int picard_max_iter = 50;
    double picard_tol = 1e-8;

    int basis_degree = 2;
    std::optional<double> z_clip;
    int threads = 1;
    bool store_y = true;    // false keeps only the start-node row of Y
    bool store_zuv = true;  // keep the Z/U/V arrays
    bool record_se = false; // per-node regression standard errors

    ConstraintMode constraint_mode() const {
        if (mode == Mode::Picard)
            return {picard_inner == Mode::Yosida, picard_inner_eps};
        return {mode == Mode::Yosida, yosida_eps};
    }
};

struct BackwardSolution {
    std::size_t n_paths = 0;
    int n_steps = 0;
    int dim = 1;
    int start_index = 0;
    bool full_y = true;
    std::vector<double> y;  // (N+1) * M, y[k*M + m]; just the start row if !full_y
    std::vector<double> z;  // N * M * dim, z[(k*dim + j)*M + m]
    std::vector<double> u;  // N * M
    std::vector<double> v;  // N * M
    std::vector<double> se; // N * M prediction standard errors (record_se)
    double start_mean_se = 0.0;  // standard error of the start-node batch mean
    int regression_fallbacks = 0;
    // Picard bookkeeping
    int iterations = 0;
    std::vector<double> residuals;

    double y_at(std::size_t m, int k) const { return y_node(k)[m]; }
    std::span<const double> y_node(int k) const {
        if (!full_y) {
            if (k != start_index)
                throw SolverError(ErrorCode::BadParameter, "solution kept only the start row");
            return {y.data(), n_paths};
        }
        return {y.data() + static_cast<std::size_t>(k) * n_paths, n_paths};
    }
    std::span<const double> y_start() const { return y_node(start_index); }
};

// One implicit variational step: given the regressed value r, the time
// weight dt and local-time weight da, produce (y, u, v).
struct ConstraintStepResult {
    double y;
    double u;
    double v;
};
ConstraintStepResult constraint_step(const ConvexSpec& phi, const ConvexSpec& psi, double r,
                                     double dt, double da, const ConstraintMode& mode);

BackwardSolution solve_backward(const ForwardPaths& trajs, const PathBundle& bundle,
                                const CoefficientSet& coeffs, const ConvexSpec& phi,
                                const ConvexSpec& psi, const SolverConfig& config);

// Picard outer iteration: Y^{n-1} frozen inside f and h, z kept current,
// started from Y^0 = 0. Throws NonConvergenceError with the residual
// history when max_iter is exhausted.
BackwardSolution picard_solve(const ForwardPaths& trajs, const PathBundle& bundle,
                              const CoefficientSet& coeffs, const ConvexSpec& phi,
                              const ConvexSpec& psi, const SolverConfig& config);

}  // namespace vibdsde
