#include "vibdsde/domain.hpp"

#include <cmath>
#include <limits>

#include "vibdsde/errors.hpp"

namespace vibdsde {

DomainSpec DomainSpec::half_space(int dim) {
    if (dim < 1) throw SolverError(ErrorCode::BadParameter, "dimension must be positive");
    DomainSpec d;
    d.kind = Kind::HalfSpace;
    d.dim = dim;
    return d;
}

DomainSpec DomainSpec::ball(double radius, double r_min, int dim) {
    if (dim < 1) throw SolverError(ErrorCode::BadParameter, "dimension must be positive");
    if (!(r_min > 0.0 && r_min < radius))
        throw SolverError(ErrorCode::BadParameter, "ball requires 0 < r_min < radius");
    DomainSpec d;
    d.kind = Kind::Ball;
    d.dim = dim;
    d.radius = radius;
    d.r_min = r_min;
    return d;
}

DomainSpec DomainSpec::whole_space(int dim) {
    if (dim < 1) throw SolverError(ErrorCode::BadParameter, "dimension must be positive");
    DomainSpec d;
    d.kind = Kind::WholeSpace;
    d.dim = dim;
    return d;
}

namespace {

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

}  // namespace

Geometry domain_geometry(const DomainSpec& dom, std::span<const double> x) {
    if (static_cast<int>(x.size()) != dom.dim)
        throw SolverError(ErrorCode::ShapeMismatch, "point dimension does not match domain");
    Geometry g;
    g.grad.assign(dom.dim, 0.0);
    switch (dom.kind) {
        case DomainSpec::Kind::HalfSpace:
            g.phi = x[0];
            g.grad[0] = 1.0;
            return g;
        case DomainSpec::Kind::Ball: {
            const double r = norm2(x);
            if (r < dom.r_min)
                throw SolverError(ErrorCode::GeometryUndefined,
                                  "ball gradient undefined inside r_min");
            g.phi = dom.radius - r;
            for (int j = 0; j < dom.dim; ++j) g.grad[j] = -x[j] / r;
            return g;
        }
        case DomainSpec::Kind::WholeSpace:
            g.phi = std::numeric_limits<double>::infinity();
            return g;
    }
    return g;
}

double reflect_step(const DomainSpec& dom, std::span<double> x) {
    switch (dom.kind) {
        case DomainSpec::Kind::HalfSpace: {
            if (x[0] >= 0.0) return 0.0;
            const double da = -x[0];
            x[0] = 0.0;
            return da;
        }
        case DomainSpec::Kind::Ball: {
            const double r = norm2(x);
            if (r <= dom.radius) return 0.0;
            const double scale = dom.radius / r;
            for (auto& v : x) v *= scale;
            return r - dom.radius;
        }
        case DomainSpec::Kind::WholeSpace:
            return 0.0;
    }
    return 0.0;
}

}  // namespace vibdsde
