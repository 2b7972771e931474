#pragma once

#include <span>
#include <vector>

#include "vibdsde/coefficients.hpp"
#include "vibdsde/domain.hpp"
#include "vibdsde/noise.hpp"

namespace vibdsde {

// Pathwise flow eta(t,x,y) driven by the backward path in Stratonovich
// sense, integrated from T down to t with the midpoint (Heun) rule on the
// grid of B. y -> eta(t,x,y) is strictly increasing under the supported
// driver families.
struct FlowSpec {
    DriverH h;
    bool use_closed_form = true;     // exp_beta family has eta = y*exp(beta*(B_T - B_t))
    double inverse_bracket = 1e9;    // search limit for the y-inverse
};

struct EtaResult {
    double eta;
    double d_eta_dy;
};

// t must be a node of the grid carrying b
EtaResult eta_flow(const FlowSpec& spec, const TimeGrid& grid, std::span<const double> b,
                   double t, std::span<const double> x, double y);

double eta_inverse(const FlowSpec& spec, const TimeGrid& grid, std::span<const double> b,
                   double t, std::span<const double> x, double w);

struct TransformedCoefficients {
    double f_tilde;
    double g_tilde;
};

// Transformed drivers of the random-coefficient PDE:
//   f~ = [f(t,x,eta) - (h dh/dy)(t,x,eta)/2 + L_x eta] / D_y eta
//   g~ = [g(t,x,eta) - <grad phi_d, D_x eta>] / D_y eta
TransformedCoefficients transform_coefficients(const FlowSpec& spec, const CoefficientSet& coeffs,
                                               const DomainSpec& dom, const TimeGrid& grid,
                                               std::span<const double> b, double t,
                                               std::span<const double> x, double y);

}  // namespace vibdsde
