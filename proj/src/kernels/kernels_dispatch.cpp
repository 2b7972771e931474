#include "vibdsde/kernels/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "vibdsde/errors.hpp"

namespace vibdsde::kern {

namespace {

const Kernels& select() {
    const char* env = std::getenv("VIBDSDE_KERNELS");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return scalar();
    if (env != nullptr && std::strcmp(env, "avx2") == 0) {
        if (!avx2_available())
            throw SolverError(ErrorCode::BadParameter, "VIBDSDE_KERNELS=avx2 but CPU lacks AVX2");
        return avx2();
    }
    if (env != nullptr && std::strcmp(env, "auto") != 0)
        throw SolverError(ErrorCode::BadParameter,
                          std::string("unknown VIBDSDE_KERNELS value: ") + env);
    return avx2_available() ? avx2() : scalar();
}

}  // namespace

const Kernels& active() {
    static const Kernels& k = select();
    return k;
}

}  // namespace vibdsde::kern
