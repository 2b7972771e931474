#include "vibdsde/kernels/kernels.hpp"

// Scalar reference kernels. The reductions replicate the 4-lane blocked
// order of the AVX2 variants so both produce the same bits.

namespace vibdsde::kern {
namespace {

void affine_s(const double* x, double a, double b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b;
}

void axpy_s(const double* x, const double* y, double c, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + c * y[i];
}

void muladd_s(const double* x, const double* u, const double* v, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + u[i] * v[i];
}

void reflect_floor_s(double* x, double* da, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double neg = 0.0 - x[i];
        da[i] = (neg > 0.0) ? neg : 0.0;
        x[i] = (x[i] > 0.0) ? x[i] : 0.0;
    }
}

void clamp_s(const double* x, double lo, double hi, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (x[i] > lo) ? x[i] : lo;
        out[i] = (t < hi) ? t : hi;
    }
}

double sum_s(const double* x, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t n4 = n / 4;
    for (std::size_t i = 0; i < n4; ++i)
        for (int j = 0; j < 4; ++j) acc[j] += x[4 * i + j];
    for (std::size_t j = 4 * n4; j < n; ++j) acc[j - 4 * n4] += x[j];
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double dot_s(const double* x, const double* y, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t n4 = n / 4;
    for (std::size_t i = 0; i < n4; ++i)
        for (int j = 0; j < 4; ++j) acc[j] += x[4 * i + j] * y[4 * i + j];
    for (std::size_t j = 4 * n4; j < n; ++j) acc[j - 4 * n4] += x[j] * y[j];
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void poly_eval_s(const double* s, const double* c, int terms, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double r = c[terms - 1];
        for (int j = terms - 2; j >= 0; --j) r = r * s[i] + c[j];
        out[i] = r;
    }
}

void power_moments_s(const double* s, const double* y, int q, double* moments, double* rhs,
                     std::size_t n) {
    const int na = 2 * q + 1;
    // lane-blocked accumulators: acc[a][lane]
    double macc[16][4];
    double racc[8][4];
    for (int a = 0; a < na; ++a)
        for (int j = 0; j < 4; ++j) macc[a][j] = 0.0;
    for (int a = 0; a <= q; ++a)
        for (int j = 0; j < 4; ++j) racc[a][j] = 0.0;

    const std::size_t n4 = n / 4;
    for (std::size_t i = 0; i < n4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const std::size_t k = 4 * i + j;
            double p = 1.0;
            for (int a = 0; a < na; ++a) {
                macc[a][j] += p;
                if (a <= q) racc[a][j] += p * y[k];
                p = p * s[k];
            }
        }
    }
    for (std::size_t k = 4 * n4; k < n; ++k) {
        const std::size_t j = k - 4 * n4;
        double p = 1.0;
        for (int a = 0; a < na; ++a) {
            macc[a][j] += p;
            if (a <= q) racc[a][j] += p * y[k];
            p = p * s[k];
        }
    }
    for (int a = 0; a < na; ++a) moments[a] = (macc[a][0] + macc[a][1]) + (macc[a][2] + macc[a][3]);
    for (int a = 0; a <= q; ++a) rhs[a] = (racc[a][0] + racc[a][1]) + (racc[a][2] + racc[a][3]);
}

}  // namespace

const Kernels& scalar() {
    static const Kernels k = {
        "scalar",  affine_s, axpy_s, muladd_s, reflect_floor_s,
        clamp_s,   sum_s,    dot_s,  poly_eval_s, power_moments_s,
    };
    return k;
}

}  // namespace vibdsde::kern
