#include "vibdsde/doss.hpp"

#include <cmath>

#include "vibdsde/errors.hpp"

namespace vibdsde {

namespace {

int node_index(const TimeGrid& grid, double t) {
    const double pos = (t - grid.t0) / grid.dt();
    const int k = static_cast<int>(std::lround(pos));
    if (k < 0 || k > grid.n_steps || std::abs(pos - k) > 1e-9)
        throw SolverError(ErrorCode::BadParameter, "t is not a node of the backward grid");
    return k;
}

// flow state and its y/x tangents
struct FlowState {
    double eta;
    double dy;
    double dx;
    double dxx;
};

FlowState derivative(const DriverH& h, double t, std::span<const double> x, const FlowState& s) {
    FlowState d;
    d.eta = h.eval(t, x, s.eta);
    const double hy = h.dy(t, x, s.eta);
    d.dy = hy * s.dy;
    if (h.x_free()) {
        d.dx = 0.0;
        d.dxx = 0.0;
    } else {
        const double hx = h.dx1(t, x, s.eta);
        const double hxy = h.dx1_dy(t, x, s.eta);
        const double hyy = h.dyy(t, x, s.eta);
        d.dx = hx + hy * s.dx;
        d.dxx = 2.0 * hxy * s.dx + hyy * s.dx * s.dx + hy * s.dxx;  // h_xx = 0 (affine c)
    }
    return d;
}

FlowState integrate_flow(const FlowSpec& spec, const TimeGrid& grid, std::span<const double> b,
                         int t_index, std::span<const double> x, double y) {
    FlowState s{y, 1.0, 0.0, 0.0};
    for (int k = grid.n_steps - 1; k >= t_index; --k) {
        const double db = b[k + 1] - b[k];
        const double t1 = grid.node(k + 1);
        const double t0 = grid.node(k);
        const FlowState d1 = derivative(spec.h, t1, x, s);
        FlowState pred{s.eta + d1.eta * db, s.dy + d1.dy * db, s.dx + d1.dx * db,
                       s.dxx + d1.dxx * db};
        const FlowState d2 = derivative(spec.h, t0, x, pred);
        s.eta += 0.5 * (d1.eta + d2.eta) * db;
        s.dy += 0.5 * (d1.dy + d2.dy) * db;
        s.dx += 0.5 * (d1.dx + d2.dx) * db;
        s.dxx += 0.5 * (d1.dxx + d2.dxx) * db;
    }
    return s;
}

FlowState flow_at(const FlowSpec& spec, const TimeGrid& grid, std::span<const double> b, double t,
                  std::span<const double> x, double y) {
    if (b.size() != static_cast<std::size_t>(grid.n_steps) + 1)
        throw SolverError(ErrorCode::ShapeMismatch, "backward path does not match grid");
    const int ti = node_index(grid, t);
    if (spec.h.is_zero()) return {y, 1.0, 0.0, 0.0};
    if (spec.h.kind == DriverH::Kind::ExpBeta && spec.use_closed_form) {
        const double e = std::exp(spec.h.beta * (b[grid.n_steps] - b[ti]));
        return {y * e, e, 0.0, 0.0};
    }
    return integrate_flow(spec, grid, b, ti, x, y);
}

}  // namespace

EtaResult eta_flow(const FlowSpec& spec, const TimeGrid& grid, std::span<const double> b,
                   double t, std::span<const double> x, double y) {
    const FlowState s = flow_at(spec, grid, b, t, x, y);
    return {s.eta, s.dy};
}

double eta_inverse(const FlowSpec& spec, const TimeGrid& grid, std::span<const double> b,
                   double t, std::span<const double> x, double w) {
    if (spec.h.is_zero()) return w;
    if (spec.h.kind == DriverH::Kind::ExpBeta && spec.use_closed_form) {
        const int ti = node_index(grid, t);
        return w * std::exp(-spec.h.beta * (b[grid.n_steps] - b[ti]));
    }
    const auto value = [&](double y) { return flow_at(spec, grid, b, t, x, y).eta; };
    double lo = w - 1.0 - std::abs(w);
    double hi = w + 1.0 + std::abs(w);
    int guard = 0;
    while (value(lo) > w) {
        lo = 2.0 * lo - hi;
        if (std::abs(lo) > spec.inverse_bracket || ++guard > 120)
            throw SolverError(ErrorCode::OutOfRange, "eta_inverse: w below the flow range");
    }
    guard = 0;
    while (value(hi) < w) {
        hi = 2.0 * hi - lo;
        if (std::abs(hi) > spec.inverse_bracket || ++guard > 120)
            throw SolverError(ErrorCode::OutOfRange, "eta_inverse: w above the flow range");
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (value(mid) < w)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

TransformedCoefficients transform_coefficients(const FlowSpec& spec, const CoefficientSet& coeffs,
                                               const DomainSpec& dom, const TimeGrid& grid,
                                               std::span<const double> b, double t,
                                               std::span<const double> x, double y) {
    const FlowState s = flow_at(spec, grid, b, t, x, y);
    const double eta = s.eta;
    const double dy_eta = s.dy;

    const double f_val = coeffs.f.eval(t, x, eta, std::span<const double>{});
    const double h_corr = 0.5 * spec.h.eval(t, x, eta) * spec.h.dy(t, x, eta);

    double lx_eta = 0.0;
    double grad_dot_dx = 0.0;
    if (!spec.h.x_free()) {
        const double s2 = coeffs.sigma.s * coeffs.sigma.s;
        lx_eta = 0.5 * s2 * s.dxx + coeffs.b.component(x, 0) * s.dx;
        const Geometry geo = domain_geometry(dom, x);
        grad_dot_dx = geo.grad.empty() ? 0.0 : geo.grad[0] * s.dx;
    }

    const double g_val = coeffs.g.eval(t, x, eta);
    return {(f_val - h_corr + lx_eta) / dy_eta, (g_val - grad_dot_dx) / dy_eta};
}

}  // namespace vibdsde
