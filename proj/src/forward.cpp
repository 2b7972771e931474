#include "vibdsde/forward.hpp"

#include <cmath>

#include "vibdsde/errors.hpp"
#include "vibdsde/kernels/kernels.hpp"
#include "vibdsde/parallel.hpp"

namespace vibdsde {

namespace {

double phi_value(const DomainSpec& dom, const double* x, std::size_t stride, std::size_t m) {
    switch (dom.kind) {
        case DomainSpec::Kind::HalfSpace:
            return x[m];
        case DomainSpec::Kind::Ball: {
            double s = 0.0;
            for (int j = 0; j < dom.dim; ++j) {
                const double v = x[j * stride + m];
                s += v * v;
            }
            return dom.radius - std::sqrt(s);
        }
        case DomainSpec::Kind::WholeSpace:
            return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

// One Euler step plus Skorokhod projection for all paths. x holds
// coordinate j at offset j*M; dw_buf is scratch of size M.
void euler_project_step(const DomainSpec& dom, const CoefficientSet& coeffs, double* x,
                        const PathBundle& bundle, int step, double* dw_buf, double* da,
                        std::size_t n_paths, int threads) {
    const auto& k = kern::active();
    const double dt = bundle.grid().dt();
    const int dim = dom.dim;

    for (int j = 0; j < dim; ++j) {
        double* xj = x + static_cast<std::size_t>(j) * n_paths;
        parallel_for(n_paths, threads, [&](std::size_t lo, std::size_t hi) {
            bundle.fill_dw_step(step, j, {dw_buf + lo, hi - lo}, lo);
        });

        switch (coeffs.b.kind) {
            case Drift::Kind::Zero:
                break;
            case Drift::Kind::Constant: {
                const double vj = coeffs.b.component({}, j);
                if (vj != 0.0) k.affine(xj, 1.0, vj * dt, xj, n_paths);
                break;
            }
            case Drift::Kind::LinearX:
                k.affine(xj, 1.0 + coeffs.b.a * dt, 0.0, xj, n_paths);
                break;
        }
        if (coeffs.sigma.s != 0.0) k.axpy(xj, dw_buf, coeffs.sigma.s, xj, n_paths);
    }

    switch (dom.kind) {
        case DomainSpec::Kind::HalfSpace:
            k.reflect_floor(x, da, n_paths);
            break;
        case DomainSpec::Kind::Ball: {
            for (std::size_t m = 0; m < n_paths; ++m) {
                double s = 0.0;
                for (int j = 0; j < dim; ++j) {
                    const double v = x[static_cast<std::size_t>(j) * n_paths + m];
                    s += v * v;
                }
                const double r = std::sqrt(s);
                if (r <= dom.radius) {
                    da[m] = 0.0;
                } else {
                    const double scale = dom.radius / r;
                    for (int j = 0; j < dim; ++j)
                        x[static_cast<std::size_t>(j) * n_paths + m] *= scale;
                    da[m] = r - dom.radius;
                }
            }
            break;
        }
        case DomainSpec::Kind::WholeSpace:
            for (std::size_t m = 0; m < n_paths; ++m) da[m] = 0.0;
            break;
    }
}

void validate_start(const DomainSpec& dom, const CoefficientSet& coeffs,
                    std::span<const double> x0, const PathBundle& bundle, int start_index) {
    (void)coeffs;
    if (static_cast<int>(x0.size()) != dom.dim || bundle.dim() != dom.dim)
        throw SolverError(ErrorCode::ShapeMismatch, "x0/bundle dimension mismatch");
    if (start_index < 0 || start_index > bundle.grid().n_steps)
        throw SolverError(ErrorCode::BadParameter, "start_index outside grid");
    if (phi_value(dom, x0.data(), 1, 0) < 0.0 && dom.kind == DomainSpec::Kind::HalfSpace)
        throw SolverError(ErrorCode::BadParameter, "x0 outside the domain closure");
    if (dom.kind == DomainSpec::Kind::Ball) {
        double s = 0.0;
        for (double v : x0) s += v * v;
        if (std::sqrt(s) > dom.radius)
            throw SolverError(ErrorCode::BadParameter, "x0 outside the domain closure");
    }
}

}  // namespace

double ForwardPaths::a_at(std::size_t m, int k) const {
    double a = 0.0;
    for (int s = 0; s < k; ++s) a += da_step(s)[m];
    return a;
}

ForwardPaths simulate_forward(const DomainSpec& dom, const CoefficientSet& coeffs,
                              std::span<const double> x0, const PathBundle& bundle,
                              int start_index, int threads) {
    validate_start(dom, coeffs, x0, bundle, start_index);
    const std::size_t n_paths = bundle.n_paths();
    const int n_steps = bundle.grid().n_steps;
    const int dim = dom.dim;

    ForwardPaths out;
    out.grid = bundle.grid();
    out.n_paths = n_paths;
    out.dim = dim;
    out.start_index = start_index;
    out.x.resize(static_cast<std::size_t>(n_steps + 1) * dim * n_paths);
    out.da.assign(static_cast<std::size_t>(n_steps) * n_paths, 0.0);

    for (int k = 0; k <= start_index; ++k)
        for (int j = 0; j < dim; ++j) {
            double* xj = out.x.data() + (static_cast<std::size_t>(k) * dim + j) * n_paths;
            for (std::size_t m = 0; m < n_paths; ++m) xj[m] = x0[j];
        }

    std::vector<double> dw_buf(n_paths);
    for (int k = start_index; k < n_steps; ++k) {
        double* cur = out.x.data() + static_cast<std::size_t>(k) * dim * n_paths;
        double* nxt = out.x.data() + static_cast<std::size_t>(k + 1) * dim * n_paths;
        std::copy(cur, cur + static_cast<std::size_t>(dim) * n_paths, nxt);
        euler_project_step(dom, coeffs, nxt, bundle, k, dw_buf.data(),
                           out.da.data() + static_cast<std::size_t>(k) * n_paths, n_paths,
                           threads);
    }
    return out;
}

ForwardSummary forward_summary(const DomainSpec& dom, const CoefficientSet& coeffs,
                               std::span<const double> x0, const PathBundle& bundle,
                               int start_index, int threads) {
    validate_start(dom, coeffs, x0, bundle, start_index);
    const auto& k = kern::active();
    const std::size_t n_paths = bundle.n_paths();
    const int n_steps = bundle.grid().n_steps;
    const int dim = dom.dim;

    ForwardSummary out;
    out.grid = bundle.grid();
    out.dim = dim;
    out.mean_x.assign(static_cast<std::size_t>(n_steps + 1) * dim, 0.0);
    out.var_x1.assign(n_steps + 1, 0.0);
    out.mean_a.assign(n_steps + 1, 0.0);
    out.contact_fraction.assign(n_steps + 1, 0.0);
    out.min_phi = std::numeric_limits<double>::infinity();

    std::vector<double> x(static_cast<std::size_t>(dim) * n_paths);
    std::vector<double> a(n_paths, 0.0);
    std::vector<double> da(n_paths, 0.0);
    std::vector<double> dw_buf(n_paths);

    const auto record = [&](int node) {
        for (int j = 0; j < dim; ++j)
            out.mean_x[static_cast<std::size_t>(node) * dim + j] =
                k.sum(x.data() + static_cast<std::size_t>(j) * n_paths, n_paths) /
                static_cast<double>(n_paths);
        const double m1 = out.mean_x[static_cast<std::size_t>(node) * dim];
        const double s2 = k.dot(x.data(), x.data(), n_paths) / static_cast<double>(n_paths);
        out.var_x1[node] = s2 - m1 * m1;
        out.mean_a[node] = k.sum(a.data(), n_paths) / static_cast<double>(n_paths);
        std::size_t contacts = 0;
        double minphi = std::numeric_limits<double>::infinity();
        if (dom.kind != DomainSpec::Kind::WholeSpace) {
            for (std::size_t m = 0; m < n_paths; ++m) {
                if (node > 0 && da[m] > 0.0) ++contacts;
                const double p = phi_value(dom, x.data(), n_paths, m);
                if (p < minphi) minphi = p;
                if (p < -kProjectionTol) ++out.containment_violations;
            }
        }
        out.contact_fraction[node] =
            static_cast<double>(contacts) / static_cast<double>(n_paths);
        if (minphi < out.min_phi) out.min_phi = minphi;
    };

    for (int j = 0; j < dim; ++j)
        for (std::size_t m = 0; m < n_paths; ++m)
            x[static_cast<std::size_t>(j) * n_paths + m] = x0[j];
    record(0);
    for (int node = 1; node <= start_index; ++node) record(node);

    for (int step = start_index; step < n_steps; ++step) {
        euler_project_step(dom, coeffs, x.data(), bundle, step, dw_buf.data(), da.data(),
                           n_paths, threads);
        for (std::size_t m = 0; m < n_paths; ++m) a[m] += da[m];
        record(step + 1);
    }
    out.mean_a_final = out.mean_a[n_steps];
    return out;
}

}  // namespace vibdsde
