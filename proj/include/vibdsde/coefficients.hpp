#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vibdsde/modulus.hpp"

namespace vibdsde {

// Piecewise-linear table in y with constant extrapolation.
struct TableY {
    std::vector<double> ys;
    std::vector<double> vals;
    double eval(double y) const;
};

// Driver f(t, x, y, z). Families keep the modulus assumptions checkable:
// linear_y/linear_yz are Lipschitz, sqrt_rho1 has exactly the rho1 modulus.
struct DriverF {
    enum class Kind { Zero, Constant, LinearY, LinearYZ, SqrtRho1, Table };

    Kind kind = Kind::Zero;
    double value = 0.0;   // Constant
    double a = 0.0;       // LinearY / LinearYZ coefficient on y
    double bz = 0.0;      // LinearYZ coefficient on sum(z)
    double scale = 1.0;   // SqrtRho1
    ModulusRho rho = ModulusRho::lipschitz_modulus(1.0);
    TableY table;

    double eval(double t, std::span<const double> x, double y, std::span<const double> z) const;
    bool depends_on_y() const { return kind != Kind::Zero && kind != Kind::Constant; }
    bool depends_on_z() const { return kind == Kind::LinearYZ; }
};

// Boundary driver g(t, x, y); the one-sided slope in y must be <= 0.
struct DriverG {
    enum class Kind { Zero, Constant, LinearY, Table };

    Kind kind = Kind::Zero;
    double value = 0.0;  // Constant; also the offset for LinearY
    double a = 0.0;      // LinearY slope (<= 0)

    TableY table;

    double eval(double t, std::span<const double> x, double y) const;
};

// Backward-noise driver h(t, x, y), z-free, with the y/x derivatives the
// Doss flow tangents need. Separable means c(x) * sin(y) with affine
// c(x) = c0 + c1 * x_1.
struct DriverH {
    enum class Kind { Zero, ExpBeta, SinY, Separable };

    Kind kind = Kind::Zero;
    double beta = 0.0;   // ExpBeta: h = beta * y
    double scale = 0.0;  // SinY: h = scale * sin(y)
    double c0 = 0.0;     // Separable
    double c1 = 0.0;

    double eval(double t, std::span<const double> x, double y) const;
    double dy(double t, std::span<const double> x, double y) const;
    double dyy(double t, std::span<const double> x, double y) const;
    // derivative in x_1 (the only coordinate the separable family uses)
    double dx1(double t, std::span<const double> x, double y) const;
    double dx1_dy(double t, std::span<const double> x, double y) const;
    bool is_zero() const { return kind == Kind::Zero; }
    bool x_free() const { return kind != Kind::Separable; }
};

struct Terminal {
    enum class Kind { Abs, Affine, Constant };

    Kind kind = Kind::Abs;
    double a = 1.0;  // Affine: a * x_1 + b
    double b = 0.0;
    double value = 0.0;  // Constant

    double eval(std::span<const double> x) const;
};

struct Drift {
    enum class Kind { Zero, Constant, LinearX };

    Kind kind = Kind::Zero;
    std::vector<double> v;  // Constant
    double a = 0.0;         // LinearX: b(x) = a * x

    double component(std::span<const double> x, int j) const;
};

struct Diffusion {
    // scaled identity: sigma(x) = s * I
    double s = 1.0;
};

// Growth/modulus constants recorded as metadata; the verify harness
// spot-checks them against the selected families.
struct GrowthConstants {
    std::optional<double> lipschitz_k;
    std::optional<double> growth_kprime;
    std::optional<double> alpha;  // in (0,1)
    std::optional<double> beta;   // <= 0
    std::optional<double> p;
};

struct CoefficientSet {
    DriverF f;
    DriverG g;
    DriverH h;
    Terminal chi;
    Drift b;
    Diffusion sigma;
    GrowthConstants constants;
};

}  // namespace vibdsde
