#include "vibdsde/modulus.hpp"

#include <cmath>

#include "vibdsde/errors.hpp"

namespace vibdsde {

ModulusRho ModulusRho::lipschitz_modulus(double k) {
    if (!(k > 0.0)) throw SolverError(ErrorCode::BadParameter, "Lipschitz constant must be > 0");
    ModulusRho r;
    r.kind = Kind::Lipschitz;
    r.lipschitz = k;
    return r;
}

ModulusRho ModulusRho::rho1(double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw SolverError(ErrorCode::BadParameter, "rho1 knot must lie in (0,1)");
    ModulusRho r;
    r.kind = Kind::Rho1;
    r.delta = delta;
    return r;
}

ModulusRho ModulusRho::rho2(double delta) {
    // log(log(1/u)) needs log(1/u) > 1 on (0, delta]
    if (!(delta > 0.0 && delta < std::exp(-1.0)))
        throw SolverError(ErrorCode::BadParameter, "rho2 knot must lie in (0, 1/e)");
    ModulusRho r;
    r.kind = Kind::Rho2;
    r.delta = delta;
    return r;
}

double ModulusRho::knot_slope() const {
    const double big_l = std::log(1.0 / delta);
    switch (kind) {
        case Kind::Lipschitz:
            return lipschitz;
        case Kind::Rho1:
            // d/du [u log(1/u)] = log(1/u) - 1
            return big_l - 1.0;
        case Kind::Rho2:
            // d/du [u L loglog] = (L - 1) loglog(1/u) - 1 at the knot
            return (big_l - 1.0) * std::log(big_l) - 1.0;
    }
    return lipschitz;
}

double rho_eval(const ModulusRho& rho, double u) {
    if (!(u >= 0.0)) throw SolverError(ErrorCode::BadParameter, "modulus argument must be >= 0");
    if (u == 0.0) return 0.0;
    switch (rho.kind) {
        case ModulusRho::Kind::Lipschitz:
            return rho.lipschitz * u;
        case ModulusRho::Kind::Rho1: {
            if (u <= rho.delta) return u * std::log(1.0 / u);
            const double at_knot = rho.delta * std::log(1.0 / rho.delta);
            return at_knot + rho.knot_slope() * (u - rho.delta);
        }
        case ModulusRho::Kind::Rho2: {
            if (u <= rho.delta) {
                const double big_l = std::log(1.0 / u);
                return u * big_l * std::log(big_l);
            }
            const double big_l = std::log(1.0 / rho.delta);
            const double at_knot = rho.delta * big_l * std::log(big_l);
            return at_knot + rho.knot_slope() * (u - rho.delta);
        }
    }
    return 0.0;
}

bool rho_diverges_at_zero(const ModulusRho& rho) {
    // Lipschitz: integral of du/(Ku) = log diverges. Rho1/Rho2: the
    // antiderivatives -loglog(1/u) and -logloglog-type grow without bound.
    (void)rho;
    return true;
}

double rho_reciprocal_integral(const ModulusRho& rho, double u_min, double u_max) {
    if (!(u_min > 0.0 && u_min < u_max))
        throw SolverError(ErrorCode::BadParameter, "integral needs 0 < u_min < u_max");
    // composite midpoint on a log-spaced grid; integrand is smooth away from 0
    const int cells = 20000;
    const double l0 = std::log(u_min), l1 = std::log(u_max);
    const double dl = (l1 - l0) / cells;
    double acc = 0.0;
    for (int i = 0; i < cells; ++i) {
        const double u = std::exp(l0 + (i + 0.5) * dl);
        acc += u * dl / rho_eval(rho, u);  // du = u dlog(u)
    }
    return acc;
}

}  // namespace vibdsde
