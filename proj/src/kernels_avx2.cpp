#include "semwave/kernels.hpp"

#if defined(__x86_64__)

#include <immintrin.h>

namespace semwave::kern::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

} // namespace

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        acc = _mm256_fmadd_pd(va, vb, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sumsq(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        acc = _mm256_fmadd_pd(va, va, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * a[i];
    return s;
}

void abs2(const cplx* z, double* out, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(z);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        // two complex values: re0 im0 re1 im1
        __m256d v = _mm256_loadu_pd(p + 2 * i);
        __m256d sq = _mm256_mul_pd(v, v);
        __m128d lo = _mm256_castpd256_pd128(sq);
        __m128d hi = _mm256_extractf128_pd(sq, 1);
        __m128d r = _mm_hadd_pd(lo, hi); // |z0|^2, |z1|^2
        _mm_storeu_pd(out + i, r);
    }
    for (; i < n; ++i)
        out[i] = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
}

double abs2_sum(const cplx* z, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(z);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(p + 2 * i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i)
        s += z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
    return s;
}

void cmul(cplx* z, const cplx* w, std::size_t n) {
    double* pz = reinterpret_cast<double*>(z);
    const double* pw = reinterpret_cast<const double*>(w);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d vz = _mm256_loadu_pd(pz + 2 * i);
        __m256d vw = _mm256_loadu_pd(pw + 2 * i);
        __m256d wr = _mm256_unpacklo_pd(vw, vw); // wr0 wr0 wr1 wr1
        __m256d wi = _mm256_unpackhi_pd(vw, vw); // wi0 wi0 wi1 wi1
        __m256d zs = _mm256_permute_pd(vz, 0x5); // im re im re
        // (zr*wr - zi*wi, zi*wr + zr*wi)
        __m256d r = _mm256_fmaddsub_pd(vz, wr, _mm256_mul_pd(zs, wi));
        _mm256_storeu_pd(pz + 2 * i, r);
    }
    for (; i < n; ++i) {
        const double zr = z[i].real(), zi = z[i].imag();
        const double wr = w[i].real(), wi = w[i].imag();
        z[i] = {zr * wr - zi * wi, zr * wi + zi * wr};
    }
}

cplx cdot(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d accre = _mm256_setzero_pd();
    __m256d accim = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(pa + 2 * i);
        __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        __m256d vas = _mm256_permute_pd(va, 0x5); // ai ar ai ar
        accre = _mm256_fmadd_pd(va, vb, accre);   // ar*br + ai*bi (pairwise)
        accim = _mm256_fmadd_pd(vas, vb, accim);  // ai*br, ar*bi
    }
    // accre lanes hold ar*br and ai*bi alternating; both sum into Re.
    double re = hsum(accre);
    // Im = sum(ar*bi - ai*br): even lanes of accim are ai*br (negative),
    // odd lanes ar*bi (positive).
    alignas(32) double tmp[4];
    _mm256_store_pd(tmp, accim);
    double im = -tmp[0] + tmp[1] - tmp[2] + tmp[3];
    for (; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

} // namespace semwave::kern::avx2

#endif // __x86_64__
