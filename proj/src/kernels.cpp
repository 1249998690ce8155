#include "semwave/kernels.hpp"

namespace semwave::kern {

namespace {

struct Lane {
    std::string_view name;
    double (*dot)(const double*, const double*, std::size_t);
    double (*sumsq)(const double*, std::size_t);
    void (*abs2)(const cplx*, double*, std::size_t);
    double (*abs2_sum)(const cplx*, std::size_t);
    void (*cmul)(cplx*, const cplx*, std::size_t);
    cplx (*cdot)(const cplx*, const cplx*, std::size_t);
};

constexpr Lane kScalar{"scalar", scalar::dot,      scalar::sumsq,
                       scalar::abs2,  scalar::abs2_sum, scalar::cmul,
                       scalar::cdot};

#if defined(__x86_64__)
constexpr Lane kAvx2{"avx2", avx2::dot,      avx2::sumsq,
                     avx2::abs2, avx2::abs2_sum, avx2::cmul,
                     avx2::cdot};

bool avx2_available() { return __builtin_cpu_supports("avx2"); }
#endif

const Lane* pick_default() {
#if defined(__x86_64__)
    if (avx2_available()) return &kAvx2;
#endif
    return &kScalar;
}

const Lane*& active() {
    static const Lane* lane = pick_default();
    return lane;
}

} // namespace

double dot(const double* a, const double* b, std::size_t n) { return active()->dot(a, b, n); }
double sumsq(const double* a, std::size_t n) { return active()->sumsq(a, n); }
void abs2(const cplx* z, double* out, std::size_t n) { active()->abs2(z, out, n); }
double abs2_sum(const cplx* z, std::size_t n) { return active()->abs2_sum(z, n); }
void cmul(cplx* z, const cplx* w, std::size_t n) { active()->cmul(z, w, n); }
cplx cdot(const cplx* a, const cplx* b, std::size_t n) { return active()->cdot(a, b, n); }

std::string_view active_lane() { return active()->name; }

bool select_lane(std::string_view name) {
    if (name == "scalar") {
        active() = &kScalar;
        return true;
    }
#if defined(__x86_64__)
    if (name == "avx2" && avx2_available()) {
        active() = &kAvx2;
        return true;
    }
#endif
    return false;
}

} // namespace semwave::kern
