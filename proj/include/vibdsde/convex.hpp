#pragma once

#include <limits>

namespace vibdsde {

// A proper convex l.s.c. scalar function with closed-form prox machinery.
// Normalization: theta(0) = 0 and theta >= 0, so indicator intervals must
// contain 0. Infinite interval endpoints are legal.
struct ConvexSpec {
    enum class Kind { Zero, IndicatorInterval, Quadratic, AbsValue };

    Kind kind = Kind::Zero;
    double lo = -std::numeric_limits<double>::infinity();  // IndicatorInterval
    double hi = std::numeric_limits<double>::infinity();
    double curvature = 0.0;  // Quadratic: theta(y) = curvature * y^2 / 2
    double scale = 0.0;      // AbsValue:  theta(y) = scale * |y|

    static ConvexSpec zero() { return ConvexSpec{}; }
    static ConvexSpec indicator_interval(double lo, double hi);
    static ConvexSpec quadratic(double c);
    static ConvexSpec abs_value(double scale);
};

// Closed interval [left, right] of supporting slopes; endpoints may be
// infinite at the boundary of Dom(theta).
struct SubdiffInterval {
    double left;
    double right;
    bool contains(double v) const { return left <= v && v <= right; }
};

// theta(y); +infinity exactly when y is outside Dom(theta)
double eval_convex(const ConvexSpec& spec, double y);

// [theta'_l(y), theta'_r(y)]; throws DomainViolation outside Dom(theta)
SubdiffInterval subdiff_interval(const ConvexSpec& spec, double y);

// (I + lam * d theta)^{-1}(x): the unique minimizer of |x-y|^2/(2 lam) + theta(y)
double resolvent(const ConvexSpec& spec, double x, double lam);

// theta_lam(x) = |x - J_lam(x)|^2 / (2 lam) + theta(J_lam(x))
double moreau_envelope(const ConvexSpec& spec, double x, double lam);

// grad theta_lam(x) = (x - J_lam(x)) / lam, an element of d theta(J_lam(x))
double yosida_gradient(const ConvexSpec& spec, double x, double lam);

}  // namespace vibdsde
