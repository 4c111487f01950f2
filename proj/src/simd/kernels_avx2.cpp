#include "cfastap/simd/kernels.hpp"

#include <immintrin.h>

// std::complex<double> is layout-compatible with double[2]; the kernels work
// on the interleaved (re, im) stream, two complex values per 256-bit lane.
namespace cfastap::simd {
namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Alternating-sign horizontal sum: v0 - v1 + v2 - v3.
inline double hsum_alt(__m256d v) {
    const __m256d sign = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    return hsum(_mm256_xor_pd(v, sign));
}

cplx cdotc_avx2(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = as_doubles(a);
    const double* pb = as_doubles(b);
    // re accumulates (ar*br, ai*bi); im accumulates (ar*bi, ai*br).
    __m256d re0 = _mm256_setzero_pd(), re1 = _mm256_setzero_pd();
    __m256d im0 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d va0 = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb0 = _mm256_loadu_pd(pb + 2 * i);
        const __m256d va1 = _mm256_loadu_pd(pa + 2 * i + 4);
        const __m256d vb1 = _mm256_loadu_pd(pb + 2 * i + 4);
        re0 = _mm256_fmadd_pd(va0, vb0, re0);
        re1 = _mm256_fmadd_pd(va1, vb1, re1);
        im0 = _mm256_fmadd_pd(va0, _mm256_permute_pd(vb0, 0b0101), im0);
        im1 = _mm256_fmadd_pd(va1, _mm256_permute_pd(vb1, 0b0101), im1);
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        re0 = _mm256_fmadd_pd(va, vb, re0);
        im0 = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), im0);
    }
    double re = hsum(_mm256_add_pd(re0, re1));
    double im = hsum_alt(_mm256_add_pd(im0, im1));
    for (; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

void caxpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const double* px = as_doubles(x);
    double* py = as_doubles(y);
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(px + 2 * i);
        const __m256d t = _mm256_mul_pd(_mm256_permute_pd(vx, 0b0101), ai);
        const __m256d prod = _mm256_fmaddsub_pd(vx, ar, t);
        _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(_mm256_loadu_pd(py + 2 * i), prod));
    }
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = {y[i].real() + alpha.real() * xr - alpha.imag() * xi,
                y[i].imag() + alpha.real() * xi + alpha.imag() * xr};
    }
}

double cnorm2_avx2(const cplx* x, std::size_t n) {
    const double* px = as_doubles(x);
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v0 = _mm256_loadu_pd(px + 2 * i);
        const __m256d v1 = _mm256_loadu_pd(px + 2 * i + 4);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_loadu_pd(px + 2 * i);
        acc0 = _mm256_fmadd_pd(v, v, acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

void cscale_avx2(double w, const cplx* x, cplx* y, std::size_t n) {
    const double* px = as_doubles(x);
    double* py = as_doubles(y);
    const __m256d vw = _mm256_set1_pd(w);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) _mm256_storeu_pd(py + 2 * i, _mm256_mul_pd(vw, _mm256_loadu_pd(px + 2 * i)));
    for (; i < n; ++i) y[i] = {w * x[i].real(), w * x[i].imag()};
}

}  // namespace

namespace detail {
const KernelTable avx2_table{Isa::avx2, cdotc_avx2, caxpy_avx2, cnorm2_avx2, cscale_avx2};
}

}  // namespace cfastap::simd
