#pragma once

namespace vibdsde {

// Concave nondecreasing modulus rho with rho(0)=0, rho(u)>0 for u>0 and a
// divergent integral of 1/rho at 0+. Rho1/Rho2 are the log families
// continued affinely above the knot delta with the C^1 slope, which keeps
// them concave.
struct ModulusRho {
    enum class Kind { Lipschitz, Rho1, Rho2 };

    Kind kind = Kind::Lipschitz;
    double lipschitz = 1.0;  // Lipschitz: rho(u) = lipschitz * u
    double delta = 0.1;      // Rho1/Rho2 knot, in (0,1); Rho2 requires delta < 1/e

    static ModulusRho lipschitz_modulus(double k);
    static ModulusRho rho1(double delta);
    static ModulusRho rho2(double delta);

    // the C^1 continuation slope at the knot
    double knot_slope() const;
};

double rho_eval(const ModulusRho& rho, double u);

// True when the 1/rho integral diverges at 0+ (all supported kinds). The
// checkable consequence is bihari_bound(alpha=0) = 0.
bool rho_diverges_at_zero(const ModulusRho& rho);

// Numeric integral of du/rho(u) over [u_min, u_max], 0 < u_min < u_max.
double rho_reciprocal_integral(const ModulusRho& rho, double u_min, double u_max);

}  // namespace vibdsde
