#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Complex double-precision inner loops used by the dictionary correlations,
// Gram accumulations and residual updates. Every kernel has a portable scalar
// reference; vectorized variants are selected once at runtime from the CPU
// feature set and must agree with the reference to rounding.
namespace cfastap::simd {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    // sum_i conj(a[i]) * b[i]
    cplx (*cdotc)(const cplx* a, const cplx* b, std::size_t n);
    // y[i] += alpha * x[i]
    void (*caxpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
    // sum_i |x[i]|^2
    double (*cnorm2)(const cplx* x, std::size_t n);
    // y[i] = w * x[i], w real
    void (*cscale)(double w, const cplx* x, cplx* y, std::size_t n);
};

std::string_view isa_name(Isa isa);

// True if `isa` was compiled in and the running CPU supports it.
bool isa_available(Isa isa);

// Table for a specific ISA. Throws std::invalid_argument if unavailable.
const KernelTable& kernel_table(Isa isa);

// Best available table. CFASTAP_KERNELS=scalar in the environment forces the
// reference path.
const KernelTable& kernels();

namespace detail {
extern const KernelTable scalar_table;
#if defined(CFASTAP_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace cfastap::simd
