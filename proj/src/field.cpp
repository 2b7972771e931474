#include "vibdsde/field.hpp"

#include <cmath>

#include "vibdsde/errors.hpp"
#include "vibdsde/kernels/kernels.hpp"

namespace vibdsde {

namespace {

int node_index(const TimeGrid& grid, double t) {
    const double pos = (t - grid.t0) / grid.dt();
    const int k = static_cast<int>(std::lround(pos));
    if (k < 0 || k > grid.n_steps || std::abs(pos - k) > 1e-9)
        throw SolverError(ErrorCode::BadParameter, "field time is not a solver grid node");
    return k;
}

double phi_d(const DomainSpec& dom, std::span<const double> x) {
    switch (dom.kind) {
        case DomainSpec::Kind::HalfSpace:
            return x[0];
        case DomainSpec::Kind::Ball: {
            double s = 0.0;
            for (double v : x) s += v * v;
            return dom.radius - std::sqrt(s);
        }
        case DomainSpec::Kind::WholeSpace:
            return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

}  // namespace

FieldResult build_field(const FieldGrid& fgrid, const DomainSpec& dom,
                        const CoefficientSet& coeffs, const ConvexSpec& phi,
                        const ConvexSpec& psi, const TimeGrid& grid, std::size_t n_paths,
                        std::uint64_t forward_seed, const SolverConfig& config) {
    if (fgrid.times.empty() || fgrid.points.empty())
        throw SolverError(ErrorCode::BadParameter, "field grid must not be empty");
    for (const auto& p : fgrid.points) {
        if (static_cast<int>(p.size()) != dom.dim)
            throw SolverError(ErrorCode::ShapeMismatch, "field point dimension mismatch");
        if (phi_d(dom, p) < 0.0)
            throw SolverError(ErrorCode::BadParameter, "field point outside the domain closure");
    }

    FieldResult out;
    out.grid = fgrid;
    out.solver_grid = grid;
    out.u.assign(fgrid.times.size() * fgrid.points.size(), 0.0);
    out.std_err.assign(out.u.size(), 0.0);

    PathBundle bundle(grid, n_paths, dom.dim, forward_seed, fgrid.scenario_seed);

    SolverConfig cfg = config;
    cfg.store_y = false;
    cfg.store_zuv = false;
    cfg.record_se = false;

    const auto& k = kern::active();
    for (std::size_t ti = 0; ti < fgrid.times.size(); ++ti) {
        const int start = node_index(grid, fgrid.times[ti]);
        for (std::size_t xi = 0; xi < fgrid.points.size(); ++xi) {
            const ForwardPaths trajs =
                simulate_forward(dom, coeffs, fgrid.points[xi], bundle, start, cfg.threads);
            const BackwardSolution sol = solve_backward(trajs, bundle, coeffs, phi, psi, cfg);
            const auto ys = sol.y_start();
            out.u[ti * fgrid.points.size() + xi] =
                k.sum(ys.data(), ys.size()) / static_cast<double>(ys.size());
            out.std_err[ti * fgrid.points.size() + xi] = sol.start_mean_se;
            out.regression_fallbacks += sol.regression_fallbacks;
        }
    }
    return out;
}

namespace {

// least-squares slope of log(ms) against log(dist)
double fit_exponent(const std::vector<double>& dist, const std::vector<double>& ms) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (dist[i] > 0.0 && ms[i] > 0.0) {
            lx.push_back(std::log(dist[i]));
            ly.push_back(std::log(ms[i]));
        }
    if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double n = static_cast<double>(lx.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double point_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return std::sqrt(s);
}

}  // namespace

FieldDiagnostics field_diagnostics(const FieldResult& field, const DomainSpec& dom,
                                   const CoefficientSet& coeffs, const ConvexSpec& phi,
                                   const ConvexSpec& psi) {
    const auto& times = field.grid.times;
    const auto& points = field.grid.points;
    if (times.size() < 2 || points.size() < 2)
        throw SolverError(ErrorCode::BadParameter, "diagnostics need >= 2 nodes per axis");

    FieldDiagnostics d;

    // adjacent jumps
    for (std::size_t ti = 0; ti < times.size(); ++ti)
        for (std::size_t xi = 0; xi + 1 < points.size(); ++xi)
            d.max_jump_x = std::max(d.max_jump_x,
                                    std::abs(field.at(ti, xi + 1) - field.at(ti, xi)));
    for (std::size_t xi = 0; xi < points.size(); ++xi)
        for (std::size_t ti = 0; ti + 1 < times.size(); ++ti)
            d.max_jump_t = std::max(d.max_jump_t,
                                    std::abs(field.at(ti + 1, xi) - field.at(ti, xi)));

    // mean-square increments at lags 1, 2, 4
    std::vector<double> dist_x, ms_x, dist_t, ms_t;
    for (std::size_t lag = 1; lag <= 4; lag *= 2) {
        if (points.size() > lag) {
            double acc = 0.0, dm = 0.0;
            std::size_t cnt = 0;
            for (std::size_t ti = 0; ti < times.size(); ++ti)
                for (std::size_t xi = 0; xi + lag < points.size(); ++xi) {
                    const double diff = field.at(ti, xi + lag) - field.at(ti, xi);
                    acc += diff * diff;
                    dm += point_dist(points[xi + lag], points[xi]);
                    ++cnt;
                }
            dist_x.push_back(dm / static_cast<double>(cnt));
            ms_x.push_back(acc / static_cast<double>(cnt));
        }
        if (times.size() > lag) {
            double acc = 0.0, dm = 0.0;
            std::size_t cnt = 0;
            for (std::size_t xi = 0; xi < points.size(); ++xi)
                for (std::size_t ti = 0; ti + lag < times.size(); ++ti) {
                    const double diff = field.at(ti + lag, xi) - field.at(ti, xi);
                    acc += diff * diff;
                    dm += std::abs(times[ti + lag] - times[ti]);
                    ++cnt;
                }
            dist_t.push_back(dm / static_cast<double>(cnt));
            ms_t.push_back(acc / static_cast<double>(cnt));
        }
    }
    d.exponent_x = fit_exponent(dist_x, ms_x);
    d.exponent_t = fit_exponent(dist_t, ms_t);

    // domain membership of the field values
    for (std::size_t ti = 0; ti < times.size(); ++ti)
        for (std::size_t xi = 0; xi < points.size(); ++xi) {
            const double u = field.at(ti, xi);
            const double slack = 1e-9 * (1.0 + std::abs(u));
            if (std::isinf(eval_convex(phi, u)) &&
                std::isinf(eval_convex(phi, u - slack)) && std::isinf(eval_convex(phi, u + slack)))
                ++d.membership_violations;
            if (phi_d(dom, points[xi]) <= kProjectionTol) {
                if (std::isinf(eval_convex(psi, u)) && std::isinf(eval_convex(psi, u - slack)) &&
                    std::isinf(eval_convex(psi, u + slack)))
                    ++d.membership_violations;
            }
        }

    // terminal row must reproduce chi exactly
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        if (std::abs(times[ti] - field.solver_grid.t_end) > 1e-12) continue;
        for (std::size_t xi = 0; xi < points.size(); ++xi) {
            const double chi = coeffs.chi.eval(points[xi]);
            d.terminal_mismatch =
                std::max(d.terminal_mismatch, std::abs(field.at(ti, xi) - chi));
        }
    }
    return d;
}

}  // namespace vibdsde
