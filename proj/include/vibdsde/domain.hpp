#pragma once

#include <span>
#include <vector>

namespace vibdsde {

// Smooth domain Theta = {phi_d > 0} with unit inward normal grad(phi_d) on
// the boundary. Supported geometries keep the discrete Skorokhod projection
// exact: half-space clamps the first coordinate, the ball rescales radially.
struct DomainSpec {
    enum class Kind { HalfSpace, Ball, WholeSpace };

    Kind kind = Kind::HalfSpace;
    int dim = 1;
    double radius = 1.0;  // Ball
    double r_min = 0.05;  // Ball: gradient queries below this radius are rejected

    static DomainSpec half_space(int dim);
    static DomainSpec ball(double radius, double r_min, int dim);
    static DomainSpec whole_space(int dim);
};

struct Geometry {
    double phi;
    std::vector<double> grad;  // unit inward normal (zero for WholeSpace)
};

// (phi_d(x), grad phi_d(x)); GeometryUndefined for ball queries inside r_min
Geometry domain_geometry(const DomainSpec& dom, std::span<const double> x);

// In-place normal projection of a candidate point onto the closure of
// Theta; returns the displacement traveled along the inward normal.
double reflect_step(const DomainSpec& dom, std::span<double> x);

// containment slack: projection is exact up to rounding
inline constexpr double kProjectionTol = 1e-12;

}  // namespace vibdsde
