#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Data-parallel inner loops used throughout the library. Scalar reference
// implementations always exist; an AVX2 lane is selected at runtime when the
// CPU supports it. Both lanes must agree to floating-point roundoff (the
// equivalence tests pin this down).
namespace semwave::kern {

using cplx = std::complex<double>;

// a . b
double dot(const double* a, const double* b, std::size_t n);
// sum a_i^2
double sumsq(const double* a, std::size_t n);
// out_i = |z_i|^2
void abs2(const cplx* z, double* out, std::size_t n);
// sum |z_i|^2
double abs2_sum(const cplx* z, std::size_t n);
// z_i *= w_i
void cmul(cplx* z, const cplx* w, std::size_t n);
// sum conj(a_i) * b_i
cplx cdot(const cplx* a, const cplx* b, std::size_t n);

// Name of the active lane ("scalar" or "avx2").
std::string_view active_lane();
// Force a lane by name; returns false if unavailable on this CPU.
bool select_lane(std::string_view name);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sumsq(const double* a, std::size_t n);
void abs2(const cplx* z, double* out, std::size_t n);
double abs2_sum(const cplx* z, std::size_t n);
void cmul(cplx* z, const cplx* w, std::size_t n);
cplx cdot(const cplx* a, const cplx* b, std::size_t n);
} // namespace scalar

#if defined(__x86_64__)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sumsq(const double* a, std::size_t n);
void abs2(const cplx* z, double* out, std::size_t n);
double abs2_sum(const cplx* z, std::size_t n);
void cmul(cplx* z, const cplx* w, std::size_t n);
cplx cdot(const cplx* a, const cplx* b, std::size_t n);
} // namespace avx2
#endif

} // namespace semwave::kern
