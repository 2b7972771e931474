#pragma once

#include <cstddef>

namespace vibdsde::kern {

// Data-parallel inner-loop primitives. Every operation is defined with a
// fixed evaluation order (reductions use four independent lanes over
// stride-4 blocks, combined as (l0+l1)+(l2+l3)), so the scalar reference
// and the AVX2 variant produce bitwise-identical results and can be
// swapped at runtime without touching any reproducibility contract.
struct Kernels {
    const char* name;

    // out[i] = a*x[i] + b
    void (*affine)(const double* x, double a, double b, double* out, std::size_t n);
    // out[i] = x[i] + c*y[i]
    void (*axpy)(const double* x, const double* y, double c, double* out, std::size_t n);
    // out[i] = x[i] + u[i]*v[i]
    void (*muladd)(const double* x, const double* u, const double* v, double* out, std::size_t n);
    // da[i] = max(0, -x[i]); x[i] = max(x[i], 0)
    void (*reflect_floor)(double* x, double* da, std::size_t n);
    // out[i] = min(max(x[i], lo), hi); lo/hi may be infinite
    void (*clamp)(const double* x, double lo, double hi, double* out, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
    // Horner: out[i] = c[0] + s[i]*(c[1] + s[i]*(... c[terms-1])), terms >= 1
    void (*poly_eval)(const double* s, const double* c, int terms, double* out, std::size_t n);
    // moments[a] = sum_i s[i]^a, a = 0..2q; rhs[a] = sum_i s[i]^a * y[i], a = 0..q
    void (*power_moments)(const double* s, const double* y, int q, double* moments, double* rhs,
                          std::size_t n);
};

const Kernels& scalar();
bool avx2_available();
// Preconditions: avx2_available(). The pointers run AVX2 code paths.
const Kernels& avx2();

// Selected once per process: VIBDSDE_KERNELS=scalar|avx2|auto (default auto,
// which picks AVX2 when the CPU supports it).
const Kernels& active();

}  // namespace vibdsde::kern
