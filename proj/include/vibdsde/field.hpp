#pragma once

#include <cstdint>
#include <vector>

#include "vibdsde/backward.hpp"

namespace vibdsde {

// (t,x) evaluation grid for the random field u(t,x) = Y_t^{t,x}. Times must
// coincide with solver grid nodes; every point must lie in the closure of
// the domain. One backward scenario (B path) is shared by all grid points,
// as is the forward noise (common random numbers).
struct FieldGrid {
    std::vector<double> times;
    std::vector<std::vector<double>> points;
    std::uint64_t scenario_seed = 0;
};

struct FieldResult {
    FieldGrid grid;
    TimeGrid solver_grid;
    std::vector<double> u;        // times x points, row-major
    std::vector<double> std_err;  // regression standard error of the start-node mean
    int regression_fallbacks = 0;

    double at(std::size_t ti, std::size_t xi) const { return u[ti * grid.points.size() + xi]; }
    double se_at(std::size_t ti, std::size_t xi) const {
        return std_err[ti * grid.points.size() + xi];
    }
};

FieldResult build_field(const FieldGrid& fgrid, const DomainSpec& dom,
                        const CoefficientSet& coeffs, const ConvexSpec& phi,
                        const ConvexSpec& psi, const TimeGrid& grid, std::size_t n_paths,
                        std::uint64_t forward_seed, const SolverConfig& config);

struct FieldDiagnostics {
    double max_jump_x = 0.0;
    double max_jump_t = 0.0;
    double exponent_x = 0.0;  // fitted scaling of mean-square increments vs |dx|
    double exponent_t = 0.0;  // vs |dt|
    std::size_t membership_violations = 0;
    double terminal_mismatch = 0.0;
};

FieldDiagnostics field_diagnostics(const FieldResult& field, const DomainSpec& dom,
                                   const CoefficientSet& coeffs, const ConvexSpec& phi,
                                   const ConvexSpec& psi);

}  // namespace vibdsde
