#include "vibdsde/backward.hpp"

#include <cmath>

#include "vibdsde/errors.hpp"
#include "vibdsde/kernels/kernels.hpp"
#include "vibdsde/parallel.hpp"
#include "vibdsde/regression.hpp"

namespace vibdsde {

namespace {

double yosida_sum(const ConvexSpec& phi, const ConvexSpec& psi, double y, double dt, double da,
                  double eps) {
    double s = y + dt * yosida_gradient(phi, y, eps);
    if (da > 0.0) s += da * yosida_gradient(psi, y, eps);
    return s;
}

}  // namespace

ConstraintStepResult constraint_step(const ConvexSpec& phi, const ConvexSpec& psi, double r,
                                     double dt, double da, const ConstraintMode& mode) {
    if (!(dt > 0.0)) throw SolverError(ErrorCode::BadParameter, "constraint step needs dt > 0");
    if (!(da >= 0.0)) throw SolverError(ErrorCode::BadParameter, "constraint step needs dA >= 0");

    const bool phi_zero = phi.kind == ConvexSpec::Kind::Zero;
    const bool psi_zero = psi.kind == ConvexSpec::Kind::Zero;
    if (phi_zero && psi_zero) return {r, 0.0, 0.0};

    if (!mode.yosida) {
        const double y_phi = resolvent(phi, r, dt);
        const double u = (r - y_phi) / dt;
        if (da > 0.0) {
            const double y = resolvent(psi, y_phi, da);
            return {y, u, (y_phi - y) / da};
        }
        return {y_phi, u, 0.0};
    }

    // monotone scalar equation y + dt*grad(phi_eps)(y) + da*grad(psi_eps)(y) = r;
    // the left side has slope >= 1, so a sign-changing bracket always exists
    const double eps = mode.eps;
    double lo = r, hi = r;
    double step = 1.0 + std::abs(dt * yosida_gradient(phi, r, eps)) +
                  (da > 0.0 ? std::abs(da * yosida_gradient(psi, r, eps)) : 0.0);
    int guard = 0;
    while (yosida_sum(phi, psi, lo, dt, da, eps) > r) {
        lo -= step;
        step *= 2.0;
        if (++guard > 200)
            throw SolverError(ErrorCode::RootFindFailure, "yosida bracket expansion failed");
    }
    step = 1.0 + std::abs(dt * yosida_gradient(phi, r, eps)) +
           (da > 0.0 ? std::abs(da * yosida_gradient(psi, r, eps)) : 0.0);
    while (yosida_sum(phi, psi, hi, dt, da, eps) < r) {
        hi += step;
        step *= 2.0;
        if (++guard > 400)
            throw SolverError(ErrorCode::RootFindFailure, "yosida bracket expansion failed");
    }
    const double tol = 1e-14 * (1.0 + std::abs(r));
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (yosida_sum(phi, psi, mid, dt, da, eps) < r)
            lo = mid;
        else
            hi = mid;
    }
    const double y = 0.5 * (lo + hi);
    const double u = phi_zero ? 0.0 : yosida_gradient(phi, y, eps);
    const double v = (da > 0.0 && !psi_zero) ? yosida_gradient(psi, y, eps) : 0.0;
    return {y, u, v};
}

namespace {

struct SweepScratch {
    std::vector<double> y_next;               // M
    std::vector<double> y_cur;                // M
    std::vector<double> r;                    // M
    std::vector<double> tmp;                  // M
    std::vector<std::vector<double>> dw;      // dim x M
    std::vector<std::vector<double>> z_step;  // dim x M
};

// One full backward sweep. When y_frozen is non-null, f and h take their
// y argument from it (the Picard iteration); g always sees the current
// iterate. Fills sol.y (always) and Z/U/V when configured.
void backward_sweep(const ForwardPaths& trajs, const PathBundle& bundle,
                    const CoefficientSet& coeffs, const ConvexSpec& phi, const ConvexSpec& psi,
                    const SolverConfig& config, const std::vector<double>* y_frozen,
                    BackwardSolution& sol, SweepScratch& ws) {
    const std::size_t n_paths = trajs.n_paths;
    const int n_steps = trajs.grid.n_steps;
    const int dim = trajs.dim;
    const int start = trajs.start_index;
    const double dt = trajs.grid.dt();
    const ConstraintMode cmode = config.constraint_mode();

    const auto write_row = [&](int k, const std::vector<double>& src) {
        if (config.store_y)
            std::copy(src.begin(), src.end(),
                      sol.y.begin() + static_cast<std::size_t>(k) * n_paths);
        else if (k == start)
            std::copy(src.begin(), src.end(), sol.y.begin());
    };

    // terminal row
    for (std::size_t m = 0; m < n_paths; ++m) {
        double pt[8];
        for (int j = 0; j < dim; ++j) pt[j] = trajs.x_at(m, n_steps, j);
        ws.y_next[m] = coeffs.chi.eval({pt, static_cast<std::size_t>(dim)});
    }
    write_row(n_steps, ws.y_next);
    if (start == n_steps) sol.start_mean_se = 0.0;

    for (int k = n_steps - 1; k >= start; --k) {
        const double tk = trajs.grid.node(k);
        const double tk1 = trajs.grid.node(k + 1);
        const double db = bundle.db(k);
        const auto da = trajs.da_step(k);

        std::vector<std::span<const double>> coords(dim);
        for (int j = 0; j < dim; ++j) coords[j] = trajs.coord(k, j);
        StepRegression reg(coords, config.basis_degree);
        if (reg.degenerate()) ++sol.regression_fallbacks;

        // z from the current-sweep continuation value
        const bool need_z = config.store_zuv || coeffs.f.depends_on_z();
        if (need_z) {
            parallel_for(n_paths, config.threads, [&](std::size_t lo, std::size_t hi) {
                for (int j = 0; j < dim; ++j)
                    bundle.fill_dw_step(k, j, {ws.dw[j].data() + lo, hi - lo}, lo);
            });
            for (int j = 0; j < dim; ++j) {
                for (std::size_t m = 0; m < n_paths; ++m)
                    ws.tmp[m] = ws.y_next[m] * ws.dw[j][m] / dt;
                reg.project(ws.tmp, ws.z_step[j]);
                if (config.z_clip) {
                    const double c = *config.z_clip;
                    kern::active().clamp(ws.z_step[j].data(), -c, c, ws.z_step[j].data(), n_paths);
                }
            }
        }

        const double* yf = y_frozen ? y_frozen->data() + static_cast<std::size_t>(k + 1) * n_paths
                                    : ws.y_next.data();
        parallel_for(n_paths, config.threads, [&](std::size_t lo, std::size_t hi) {
            double ptk[8], ptk1[8], zz[8];
            for (std::size_t m = lo; m < hi; ++m) {
                for (int j = 0; j < dim; ++j) {
                    ptk[j] = trajs.x_at(m, k, j);
                    ptk1[j] = trajs.x_at(m, k + 1, j);
                    zz[j] = need_z ? ws.z_step[j][m] : 0.0;
                }
                const std::span<const double> xk{ptk, static_cast<std::size_t>(dim)};
                const std::span<const double> xk1{ptk1, static_cast<std::size_t>(dim)};
                const std::span<const double> zm{zz, static_cast<std::size_t>(dim)};
                double acc = ws.y_next[m] + coeffs.f.eval(tk, xk, yf[m], zm) * dt;
                if (da[m] > 0.0) acc += coeffs.g.eval(tk, xk, ws.y_next[m]) * da[m];
                if (!coeffs.h.is_zero()) acc += coeffs.h.eval(tk1, xk1, yf[m]) * db;
                ws.r[m] = acc;
            }
        });

        reg.project(ws.r, ws.tmp);  // y_tilde

        if (k == start) {
            double ss = 0.0;
            for (std::size_t m = 0; m < n_paths; ++m) {
                const double e = ws.r[m] - ws.tmp[m];
                ss += e * e;
            }
            const double dof = std::max<double>(1.0, static_cast<double>(n_paths) - reg.terms());
            sol.start_mean_se = std::sqrt(ss / dof / static_cast<double>(n_paths));
        }

        if (config.record_se) {
            // residual scale times prediction leverage
            double ss = 0.0;
            for (std::size_t m = 0; m < n_paths; ++m) {
                const double e = ws.r[m] - ws.tmp[m];
                ss += e * e;
            }
            const double dof = std::max<double>(1.0, static_cast<double>(n_paths) - reg.terms());
            const double sigma = std::sqrt(ss / dof);
            std::span<double> se_row{sol.se.data() + static_cast<std::size_t>(k) * n_paths,
                                     n_paths};
            reg.leverage(se_row);
            for (std::size_t m = 0; m < n_paths; ++m) se_row[m] = sigma * std::sqrt(se_row[m]);
        }

        parallel_for(n_paths, config.threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t m = lo; m < hi; ++m) {
                const auto res = constraint_step(phi, psi, ws.tmp[m], dt, da[m], cmode);
                ws.y_cur[m] = res.y;
                if (config.store_zuv) {
                    sol.u[static_cast<std::size_t>(k) * n_paths + m] = res.u;
                    sol.v[static_cast<std::size_t>(k) * n_paths + m] = res.v;
                }
            }
        });
        if (config.store_zuv && need_z)
            for (int j = 0; j < dim; ++j)
                std::copy(ws.z_step[j].begin(), ws.z_step[j].end(),
                          sol.z.begin() + (static_cast<std::size_t>(k) * dim + j) * n_paths);

        write_row(k, ws.y_cur);
        std::swap(ws.y_next, ws.y_cur);
    }

    // frozen extension: coefficients vanish below the start node
    if (config.store_y)
        for (int k = start - 1; k >= 0; --k)
            std::copy(sol.y.begin() + static_cast<std::size_t>(start) * n_paths,
                      sol.y.begin() + static_cast<std::size_t>(start + 1) * n_paths,
                      sol.y.begin() + static_cast<std::size_t>(k) * n_paths);
}

BackwardSolution make_solution(const ForwardPaths& trajs, const SolverConfig& config) {
    BackwardSolution sol;
    sol.n_paths = trajs.n_paths;
    sol.n_steps = trajs.grid.n_steps;
    sol.dim = trajs.dim;
    sol.start_index = trajs.start_index;
    sol.full_y = config.store_y;
    sol.y.assign(config.store_y ? static_cast<std::size_t>(sol.n_steps + 1) * sol.n_paths
                                : sol.n_paths,
                 0.0);
    if (config.store_zuv) {
        sol.z.assign(static_cast<std::size_t>(sol.n_steps) * sol.dim * sol.n_paths, 0.0);
        sol.u.assign(static_cast<std::size_t>(sol.n_steps) * sol.n_paths, 0.0);
        sol.v.assign(static_cast<std::size_t>(sol.n_steps) * sol.n_paths, 0.0);
    }
    if (config.record_se)
        sol.se.assign(static_cast<std::size_t>(sol.n_steps) * sol.n_paths, 0.0);
    return sol;
}

SweepScratch make_scratch(const ForwardPaths& trajs) {
    SweepScratch ws;
    ws.y_next.resize(trajs.n_paths);
    ws.y_cur.resize(trajs.n_paths);
    ws.r.resize(trajs.n_paths);
    ws.tmp.resize(trajs.n_paths);
    ws.dw.assign(trajs.dim, std::vector<double>(trajs.n_paths));
    ws.z_step.assign(trajs.dim, std::vector<double>(trajs.n_paths));
    return ws;
}

void check_shapes(const ForwardPaths& trajs, const PathBundle& bundle) {
    if (trajs.n_paths != bundle.n_paths() || trajs.dim != bundle.dim() ||
        trajs.grid.n_steps != bundle.grid().n_steps)
        throw SolverError(ErrorCode::ShapeMismatch, "trajectories and noise bundle disagree");
    if (trajs.dim > 8)
        throw SolverError(ErrorCode::BadParameter, "state dimension above solver limit (8)");
}

}  // namespace

BackwardSolution solve_backward(const ForwardPaths& trajs, const PathBundle& bundle,
                                const CoefficientSet& coeffs, const ConvexSpec& phi,
                                const ConvexSpec& psi, const SolverConfig& config) {
    check_shapes(trajs, bundle);
    if (config.mode == SolverConfig::Mode::Picard)
        return picard_solve(trajs, bundle, coeffs, phi, psi, config);
    if (config.mode == SolverConfig::Mode::Yosida && !(config.yosida_eps > 0.0))
        throw SolverError(ErrorCode::BadParameter, "yosida eps must be > 0");

    BackwardSolution sol = make_solution(trajs, config);
    SweepScratch ws = make_scratch(trajs);
    backward_sweep(trajs, bundle, coeffs, phi, psi, config, nullptr, sol, ws);
    sol.iterations = 1;
    return sol;
}

BackwardSolution picard_solve(const ForwardPaths& trajs, const PathBundle& bundle,
                              const CoefficientSet& coeffs, const ConvexSpec& phi,
                              const ConvexSpec& psi, const SolverConfig& config) {
    check_shapes(trajs, bundle);
    if (config.picard_max_iter < 1)
        throw SolverError(ErrorCode::BadParameter, "picard max_iter must be >= 1");
    if (!(config.picard_tol > 0.0))
        throw SolverError(ErrorCode::BadParameter, "picard tol must be > 0");

    SolverConfig cfg = config;
    cfg.store_y = true;  // the outer iteration needs the whole sweep
    BackwardSolution sol = make_solution(trajs, cfg);
    SweepScratch ws = make_scratch(trajs);
    const std::size_t n_nodes = static_cast<std::size_t>(trajs.grid.n_steps) + 1;
    std::vector<double> y_prev(n_nodes * trajs.n_paths, 0.0);

    for (int it = 1; it <= cfg.picard_max_iter; ++it) {
        backward_sweep(trajs, bundle, coeffs, phi, psi, cfg, &y_prev, sol, ws);
        double gap = 0.0;
        for (std::size_t k = 0; k < n_nodes; ++k) {
            double ms = 0.0;
            for (std::size_t m = 0; m < trajs.n_paths; ++m) {
                const double d = sol.y[k * trajs.n_paths + m] - y_prev[k * trajs.n_paths + m];
                ms += d * d;
            }
            ms /= static_cast<double>(trajs.n_paths);
            if (ms > gap) gap = ms;
        }
        sol.residuals.push_back(gap);
        sol.iterations = it;
        if (gap < config.picard_tol) return sol;
        y_prev = sol.y;
    }
    throw NonConvergenceError("picard iteration exhausted max_iter", sol.residuals);
}

}  // namespace vibdsde
