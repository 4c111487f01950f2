#include "cfastap/simd/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace cfastap::simd {

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(CFASTAP_HAVE_AVX2)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& kernel_table(Isa isa) {
    if (!isa_available(isa)) {
        throw std::invalid_argument("kernel ISA not available: " + std::string(isa_name(isa)));
    }
#if defined(CFASTAP_HAVE_AVX2)
    if (isa == Isa::avx2) return detail::avx2_table;
#endif
    return detail::scalar_table;
}

const KernelTable& kernels() {
    static const KernelTable& table = [] () -> const KernelTable& {
        const char* forced = std::getenv("CFASTAP_KERNELS");
        if (forced != nullptr && std::string_view(forced) == "scalar") return detail::scalar_table;
        if (isa_available(Isa::avx2)) return kernel_table(Isa::avx2);
        return detail::scalar_table;
    }();
    return table;
}

}  // namespace cfastap::simd
