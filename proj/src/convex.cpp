#include "vibdsde/convex.hpp"

#include <cmath>

#include "vibdsde/errors.hpp"

namespace vibdsde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_lam(double lam) {
    if (!(lam > 0.0)) throw SolverError(ErrorCode::BadParameter, "prox parameter must be > 0");
}

}  // namespace

ConvexSpec ConvexSpec::indicator_interval(double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi)
        throw SolverError(ErrorCode::BadParameter, "indicator interval requires lo <= hi");
    if (!(lo <= 0.0 && 0.0 <= hi))
        throw SolverError(ErrorCode::BadParameter,
                          "indicator interval must contain 0 (theta(0) = 0 normalization)");
    ConvexSpec s;
    s.kind = Kind::IndicatorInterval;
    s.lo = lo;
    s.hi = hi;
    return s;
}

ConvexSpec ConvexSpec::quadratic(double c) {
    if (!(c >= 0.0)) throw SolverError(ErrorCode::BadParameter, "quadratic curvature must be >= 0");
    ConvexSpec s;
    s.kind = Kind::Quadratic;
    s.curvature = c;
    return s;
}

ConvexSpec ConvexSpec::abs_value(double scale) {
    if (!(scale >= 0.0)) throw SolverError(ErrorCode::BadParameter, "abs scale must be >= 0");
    ConvexSpec s;
    s.kind = Kind::AbsValue;
    s.scale = scale;
    return s;
}

double eval_convex(const ConvexSpec& spec, double y) {
    switch (spec.kind) {
        case ConvexSpec::Kind::Zero:
            return 0.0;
        case ConvexSpec::Kind::IndicatorInterval:
            return (y >= spec.lo && y <= spec.hi) ? 0.0 : kInf;
        case ConvexSpec::Kind::Quadratic:
            return 0.5 * spec.curvature * y * y;
        case ConvexSpec::Kind::AbsValue:
            return spec.scale * std::abs(y);
    }
    return 0.0;
}

SubdiffInterval subdiff_interval(const ConvexSpec& spec, double y) {
    switch (spec.kind) {
        case ConvexSpec::Kind::Zero:
            return {0.0, 0.0};
        case ConvexSpec::Kind::IndicatorInterval: {
            if (y < spec.lo || y > spec.hi)
                throw SolverError(ErrorCode::DomainViolation,
                                  "subdifferential query outside Dom(theta)");
            double left = 0.0, right = 0.0;
            if (y == spec.lo) left = -kInf;
            if (y == spec.hi) right = kInf;
            return {left, right};
        }
        case ConvexSpec::Kind::Quadratic:
            return {spec.curvature * y, spec.curvature * y};
        case ConvexSpec::Kind::AbsValue: {
            if (y > 0.0) return {spec.scale, spec.scale};
            if (y < 0.0) return {-spec.scale, -spec.scale};
            return {-spec.scale, spec.scale};
        }
    }
    return {0.0, 0.0};
}

double resolvent(const ConvexSpec& spec, double x, double lam) {
    require_lam(lam);
    switch (spec.kind) {
        case ConvexSpec::Kind::Zero:
            return x;
        case ConvexSpec::Kind::IndicatorInterval: {
            // projection; lam-independent
            const double t = (x > spec.lo) ? x : spec.lo;
            return (t < spec.hi) ? t : spec.hi;
        }
        case ConvexSpec::Kind::Quadratic:
            return x / (1.0 + lam * spec.curvature);
        case ConvexSpec::Kind::AbsValue: {
            const double shrink = std::abs(x) - lam * spec.scale;
            return (shrink > 0.0) ? std::copysign(shrink, x) : 0.0;
        }
    }
    return x;
}

double moreau_envelope(const ConvexSpec& spec, double x, double lam) {
    require_lam(lam);
    const double j = resolvent(spec, x, lam);
    const double d = x - j;
    return d * d / (2.0 * lam) + eval_convex(spec, j);
}

double yosida_gradient(const ConvexSpec& spec, double x, double lam) {
    require_lam(lam);
    return (x - resolvent(spec, x, lam)) / lam;
}

}  // namespace vibdsde
