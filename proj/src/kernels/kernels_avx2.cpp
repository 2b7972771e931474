#include "vibdsde/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#define VIBDSDE_AVX2 __attribute__((target("avx2")))

namespace vibdsde::kern {
namespace {

VIBDSDE_AVX2 void affine_v(const double* x, double a, double b, double* out, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(va, vx), vb));
    }
    for (; i < n; ++i) out[i] = a * x[i] + b;
}

VIBDSDE_AVX2 void axpy_v(const double* x, const double* y, double c, double* out, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(out + i, _mm256_add_pd(vx, _mm256_mul_pd(vc, vy)));
    }
    for (; i < n; ++i) out[i] = x[i] + c * y[i];
}

VIBDSDE_AVX2 void muladd_v(const double* x, const double* u, const double* v, double* out,
                           std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        __m256d vu = _mm256_loadu_pd(u + i);
        __m256d vv = _mm256_loadu_pd(v + i);
        _mm256_storeu_pd(out + i, _mm256_add_pd(vx, _mm256_mul_pd(vu, vv)));
    }
    for (; i < n; ++i) out[i] = x[i] + u[i] * v[i];
}

VIBDSDE_AVX2 void reflect_floor_v(double* x, double* da, std::size_t n) {
    const __m256d vz = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        __m256d vneg = _mm256_sub_pd(vz, vx);
        // maxpd(a,b) = a > b ? a : b, matching the scalar ternaries
        _mm256_storeu_pd(da + i, _mm256_max_pd(vneg, vz));
        _mm256_storeu_pd(x + i, _mm256_max_pd(vx, vz));
    }
    for (; i < n; ++i) {
        const double neg = 0.0 - x[i];
        da[i] = (neg > 0.0) ? neg : 0.0;
        x[i] = (x[i] > 0.0) ? x[i] : 0.0;
    }
}

VIBDSDE_AVX2 void clamp_v(const double* x, double lo, double hi, double* out, std::size_t n) {
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vhi = _mm256_set1_pd(hi);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        __m256d t = _mm256_max_pd(vx, vlo);
        _mm256_storeu_pd(out + i, _mm256_min_pd(t, vhi));
    }
    for (; i < n; ++i) {
        const double t = (x[i] > lo) ? x[i] : lo;
        out[i] = (t < hi) ? t : hi;
    }
}

VIBDSDE_AVX2 double sum_v(const double* x, std::size_t n) {
    __m256d vacc = _mm256_setzero_pd();
    const std::size_t n4 = n / 4;
    for (std::size_t i = 0; i < n4; ++i) vacc = _mm256_add_pd(vacc, _mm256_loadu_pd(x + 4 * i));
    double acc[4];
    _mm256_storeu_pd(acc, vacc);
    for (std::size_t j = 4 * n4; j < n; ++j) acc[j - 4 * n4] += x[j];
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

VIBDSDE_AVX2 double dot_v(const double* x, const double* y, std::size_t n) {
    __m256d vacc = _mm256_setzero_pd();
    const std::size_t n4 = n / 4;
    for (std::size_t i = 0; i < n4; ++i) {
        __m256d vx = _mm256_loadu_pd(x + 4 * i);
        __m256d vy = _mm256_loadu_pd(y + 4 * i);
        vacc = _mm256_add_pd(vacc, _mm256_mul_pd(vx, vy));
    }
    double acc[4];
    _mm256_storeu_pd(acc, vacc);
    for (std::size_t j = 4 * n4; j < n; ++j) acc[j - 4 * n4] += x[j] * y[j];
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

VIBDSDE_AVX2 void poly_eval_v(const double* s, const double* c, int terms, double* out,
                              std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vs = _mm256_loadu_pd(s + i);
        __m256d r = _mm256_set1_pd(c[terms - 1]);
        for (int j = terms - 2; j >= 0; --j)
            r = _mm256_add_pd(_mm256_mul_pd(r, vs), _mm256_set1_pd(c[j]));
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) {
        double r = c[terms - 1];
        for (int j = terms - 2; j >= 0; --j) r = r * s[i] + c[j];
        out[i] = r;
    }
}

VIBDSDE_AVX2 void power_moments_v(const double* s, const double* y, int q, double* moments,
                                  double* rhs, std::size_t n) {
    const int na = 2 * q + 1;
    __m256d macc[16];
    __m256d racc[8];
    for (int a = 0; a < na; ++a) macc[a] = _mm256_setzero_pd();
    for (int a = 0; a <= q; ++a) racc[a] = _mm256_setzero_pd();

    const std::size_t n4 = n / 4;
    const __m256d one = _mm256_set1_pd(1.0);
    for (std::size_t i = 0; i < n4; ++i) {
        __m256d vs = _mm256_loadu_pd(s + 4 * i);
        __m256d vy = _mm256_loadu_pd(y + 4 * i);
        __m256d p = one;
        for (int a = 0; a < na; ++a) {
            macc[a] = _mm256_add_pd(macc[a], p);
            if (a <= q) racc[a] = _mm256_add_pd(racc[a], _mm256_mul_pd(p, vy));
            p = _mm256_mul_pd(p, vs);
        }
    }

    double ml[16][4], rl[8][4];
    for (int a = 0; a < na; ++a) _mm256_storeu_pd(ml[a], macc[a]);
    for (int a = 0; a <= q; ++a) _mm256_storeu_pd(rl[a], racc[a]);

    for (std::size_t k = 4 * n4; k < n; ++k) {
        const std::size_t j = k - 4 * n4;
        double p = 1.0;
        for (int a = 0; a < na; ++a) {
            ml[a][j] += p;
            if (a <= q) rl[a][j] += p * y[k];
            p = p * s[k];
        }
    }
    for (int a = 0; a < na; ++a) moments[a] = (ml[a][0] + ml[a][1]) + (ml[a][2] + ml[a][3]);
    for (int a = 0; a <= q; ++a) rhs[a] = (rl[a][0] + rl[a][1]) + (rl[a][2] + rl[a][3]);
}

}  // namespace

bool avx2_available() { return __builtin_cpu_supports("avx2") != 0; }

const Kernels& avx2() {
    static const Kernels k = {
        "avx2",  affine_v, axpy_v, muladd_v, reflect_floor_v,
        clamp_v, sum_v,    dot_v,  poly_eval_v, power_moments_v,
    };
    return k;
}

}  // namespace vibdsde::kern

#else  // non-x86: dispatch falls back to the scalar reference

namespace vibdsde::kern {
bool avx2_available() { return false; }
const Kernels& avx2() { return scalar(); }
}  // namespace vibdsde::kern

#endif
