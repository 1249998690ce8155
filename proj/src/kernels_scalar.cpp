#include "semwave/kernels.hpp"

namespace semwave::kern::scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sumsq(const double* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
    return s;
}

void abs2(const cplx* z, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
}

double abs2_sum(const cplx* z, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
    return s;
}

void cmul(cplx* z, const cplx* w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double zr = z[i].real(), zi = z[i].imag();
        const double wr = w[i].real(), wi = w[i].imag();
        z[i] = {zr * wr - zi * wi, zr * wi + zi * wr};
    }
}

cplx cdot(const cplx* a, const cplx* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

} // namespace semwave::kern::scalar
