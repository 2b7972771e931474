#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "vibdsde/backward.hpp"
#include "vibdsde/modulus.hpp"

namespace vibdsde {

// ---------------------------------------------------------------- bihari

// Upper bound u(t) <= G^{-1}(G(alpha) + int_0^t f) with G the antiderivative
// of 1/w. Returns 0 for alpha = 0 when 1/w is non-integrable at 0+.
double bihari_bound(double alpha, const std::function<double(double)>& f, const ModulusRho& w,
                    double t);
double bihari_bound(double alpha, const std::function<double(double)>& f,
                    const std::function<double(double)>& w, double t, bool w_diverges_at_zero);

// ------------------------------------------------------------ comparison

struct ComparisonProblem {
    DomainSpec dom;
    CoefficientSet coeffs;
    ConvexSpec phi;
    ConvexSpec psi;
    std::vector<double> x0;
};

struct ComparisonReport {
    bool pass = false;
    double violation_fraction = 0.0;
    double max_violation = 0.0;     // in units of the per-node standard error
    std::size_t nodes_checked = 0;
};

// Solves both problems on common noise and checks Y1 <= Y2 up to the
// regression standard error. The problems may differ only in (chi, f, g);
// violated (H6) ordering raises HypothesisViolation.
ComparisonReport comparison_check(const ComparisonProblem& p1, const ComparisonProblem& p2,
                                  const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed,
                                  const SolverConfig& config, double fraction_threshold = 0.005);

// -------------------------------------------------------------- rate fit

struct RateReport {
    std::vector<double> eps;
    std::vector<double> gaps;   // mean over paths and nodes of |Y_eps - Y_ref|^2
    double slope = 0.0;         // log gap vs log eps
};

RateReport yosida_rate_fit(const ComparisonProblem& problem, const TimeGrid& grid,
                           std::size_t n_paths, std::uint64_t seed,
                           const std::vector<double>& eps_list, const SolverConfig& base_config);

// ---------------------------------------------------------------- oracles

double oracle_linear_exp(double chi, double a, double t_remaining);

// fine-grid proximal backward Euler for y' = -f(y) with the phi-prox each
// step; returns values on its own uniform grid, index 0 = time 0
std::vector<double> oracle_clamped_ode(double chi, double a, const ConvexSpec& phi, double t_total,
                                       int n_steps);

double oracle_doss_closed_form(double chi, double beta, double b_increment, double t_remaining);

// Projected fully-implicit finite differences for the h = 0 variational PDE
//   du/dt + (sigma^2/2) u_xx + b u_x + f(t,x,u) in dPhi(u)  on (0, L)
//   u_x(0) + g(t,0,u) in dPsi(u)                            at x = 0
//   u_x(L) = 0 (far field), u(T,x) = chi(x)
struct Fd1dProblem {
    double length = 4.0;
    int nx = 200;
    int nt = 400;
    TimeGrid grid;  // [t0, T] of the target problem; t0 is only an eval bound
    CoefficientSet coeffs;
    ConvexSpec phi;
    ConvexSpec psi;
};

struct Fd1dSolution {
    double length;
    int nx;
    int nt;
    double t_end;
    std::vector<double> u;  // (nt+1) x (nx+1), row k = time index (0 = t=0)
    double dx() const { return length / nx; }
    double dt() const { return t_end / nt; }
    double at_time_index(int k, int i) const { return u[static_cast<std::size_t>(k) * (nx + 1) + i]; }
    // nearest-node evaluation; throws unless (t,x) aligns with the grid
    double eval(double t, double x) const;
};

Fd1dSolution oracle_fd1d(const Fd1dProblem& prob);

// change ratio |u_h - u_{h/2}|_inf / |u_{h/2} - u_{h/4}|_inf over the given
// probe points; >= ~2 for a first-order-consistent scheme
double fd1d_self_convergence(const Fd1dProblem& prob, const std::vector<double>& probe_times,
                             const std::vector<double>& probe_points);

// --------------------------------------------------- structural checks

struct CheckReport {
    std::string name;
    bool pass = false;
    std::map<std::string, double> metrics;
};

// Randomized verification of the Moreau-Yosida properties across all
// ConvexSpec kinds; zero tolerance violations expected.
CheckReport prop21_suite(std::uint64_t seed, int n_draws);

CheckReport modulus_checks(const ModulusRho& rho);

// (H3)/(H4)/(H8) numeric spot checks of a coefficient set against its
// recorded constants
CheckReport hypothesis_spot_checks(const CoefficientSet& coeffs, const ConvexSpec& phi,
                                   const ConvexSpec& psi, std::uint64_t seed, int n_draws);

// containment + terminal consistency + the Def 2.1(ii) sign inequality on a
// solved problem (resolvent mode)
CheckReport solution_structure_check(const BackwardSolution& sol, const ForwardPaths& trajs,
                                     const CoefficientSet& coeffs, const ConvexSpec& phi,
                                     const ConvexSpec& psi, std::uint64_t seed);

}  // namespace vibdsde
