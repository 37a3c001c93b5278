#include <cstdlib>
#include <string_view>

#include "camg/kernels.hpp"

namespace camg::kernels {

#ifndef CAMG_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const KernelTable& select() {
    if (const char* env = std::getenv("CAMG_SIMD"); env && std::string_view(env) == "scalar")
        return scalar_table();
    if (const KernelTable* t = avx2_table(); t && cpu_has_avx2()) return *t;
    return scalar_table();
}

}  // namespace

const KernelTable& active() {
    static const KernelTable& table = select();
    return table;
}

}  // namespace camg::kernels
