#include "vibdsde/coefficients.hpp"

#include <algorithm>
#include <cmath>

#include "vibdsde/errors.hpp"

namespace vibdsde {

double TableY::eval(double y) const {
    if (ys.empty() || ys.size() != vals.size())
        throw SolverError(ErrorCode::BadParameter, "table needs matching ys/vals");
    if (y <= ys.front()) return vals.front();
    if (y >= ys.back()) return vals.back();
    const auto it = std::upper_bound(ys.begin(), ys.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - ys.begin());
    const double w = (y - ys[i - 1]) / (ys[i] - ys[i - 1]);
    return vals[i - 1] + w * (vals[i] - vals[i - 1]);
}

double DriverF::eval(double, std::span<const double>, double y, std::span<const double> z) const {
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::Constant:
            return value;
        case Kind::LinearY:
            return a * y;
        case Kind::LinearYZ: {
            double zs = 0.0;
            for (double v : z) zs += v;
            return a * y + bz * zs;
        }
        case Kind::SqrtRho1:
            return scale * std::copysign(std::sqrt(rho_eval(rho, y * y)), y);
        case Kind::Table:
            return table.eval(y);
    }
    return 0.0;
}

double DriverG::eval(double, std::span<const double>, double y) const {
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::Constant:
            return value;
        case Kind::LinearY:
            return a * y + value;
        case Kind::Table:
            return table.eval(y);
    }
    return 0.0;
}

double DriverH::eval(double, std::span<const double> x, double y) const {
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::ExpBeta:
            return beta * y;
        case Kind::SinY:
            return scale * std::sin(y);
        case Kind::Separable:
            return (c0 + c1 * x[0]) * std::sin(y);
    }
    return 0.0;
}

double DriverH::dy(double, std::span<const double> x, double y) const {
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::ExpBeta:
            return beta;
        case Kind::SinY:
            return scale * std::cos(y);
        case Kind::Separable:
            return (c0 + c1 * x[0]) * std::cos(y);
    }
    return 0.0;
}

double DriverH::dyy(double, std::span<const double> x, double y) const {
    switch (kind) {
        case Kind::Zero:
        case Kind::ExpBeta:
            return 0.0;
        case Kind::SinY:
            return -scale * std::sin(y);
        case Kind::Separable:
            return -(c0 + c1 * x[0]) * std::sin(y);
    }
    return 0.0;
}

double DriverH::dx1(double, std::span<const double>, double y) const {
    return kind == Kind::Separable ? c1 * std::sin(y) : 0.0;
}

double DriverH::dx1_dy(double, std::span<const double>, double y) const {
    return kind == Kind::Separable ? c1 * std::cos(y) : 0.0;
}

double Terminal::eval(std::span<const double> x) const {
    switch (kind) {
        case Kind::Abs:
            return std::abs(x[0]);
        case Kind::Affine:
            return a * x[0] + b;
        case Kind::Constant:
            return value;
    }
    return 0.0;
}

double Drift::component(std::span<const double> x, int j) const {
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::Constant:
            return j < static_cast<int>(v.size()) ? v[j] : 0.0;
        case Kind::LinearX:
            return a * x[j];
    }
    return 0.0;
}

}  // namespace vibdsde
