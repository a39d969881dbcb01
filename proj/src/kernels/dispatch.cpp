#include <cstdlib>

#include "qtime/kernels.hpp"

namespace qtime::kernels {

#if QTIME_HAVE_AVX2_TU
const KernelTable* avx2_table_impl();
#endif

namespace {

bool cpu_has_avx2_fma() {
#if QTIME_HAVE_AVX2_TU && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool simd_disabled_by_env() {
    const char* env = std::getenv("QTIME_NO_SIMD");
    return env != nullptr && env[0] != '\0' && env[0] != '0';
}

const KernelTable* resolve() {
#if QTIME_HAVE_AVX2_TU
    if (!simd_disabled_by_env() && cpu_has_avx2_fma()) return avx2_table_impl();
#endif
    return &scalar_table();
}

}  // namespace

const KernelTable* avx2_table() {
#if QTIME_HAVE_AVX2_TU
    if (cpu_has_avx2_fma()) return avx2_table_impl();
#endif
    return nullptr;
}

const KernelTable& active_table() {
    static const KernelTable* selected = resolve();
    return *selected;
}

}  // namespace qtime::kernels
