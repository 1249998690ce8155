#include "semwave/interference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "semwave/kernels.hpp"

namespace semwave {

namespace {

InterferenceResult assemble(double a1, double a2, double dphi) {
    InterferenceResult res;
    res.direct1 = a1 * a1;
    res.direct2 = a2 * a2;
    res.interference = 2.0 * std::abs(a1) * std::abs(a2) * std::cos(dphi);
    res.total = res.direct1 + res.direct2 + res.interference;
    if (res.total < 0.0) {
        if (res.total < -1e-12)
            throw std::runtime_error("interference: negative intensity beyond roundoff");
        res.total = 0.0; // floating-point cancellation
    }
    return res;
}

} // namespace

std::complex<double> PlaneWave::eval(const std::vector<double>& x, double t) const {
    if (x.size() != wavevector.size())
        throw std::invalid_argument("plane wave: point/wavevector dimension mismatch");
    const double kx = kern::dot(wavevector.data(), x.data(), x.size());
    return std::polar(amplitude, kx - omega * t + phase);
}

InterferenceResult two_wave_intensity(const PlaneWave& w1, const PlaneWave& w2,
                                      const std::vector<double>& x, double t) {
    if (w1.wavevector.size() != w2.wavevector.size())
        throw std::invalid_argument("two_wave_intensity: wavevector dimension mismatch");
    if (x.size() != w1.wavevector.size())
        throw std::invalid_argument("two_wave_intensity: point dimension mismatch");
    // phase difference phi1 - phi2 + (k1 - k2).x - (w1 - w2) t
    double dk_x = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        dk_x += (w1.wavevector[i] - w2.wavevector[i]) * x[i];
    const double dphi = w1.phase - w2.phase + dk_x - (w1.omega - w2.omega) * t;
    return assemble(w1.amplitude, w2.amplitude, dphi);
}

InterferenceResult embedding_interference(const EmbeddingVector& v1, const EmbeddingVector& v2,
                                          double a1, double a2, double alpha, double beta,
                                          const std::vector<double>& x) {
    if (v1.dim() != v2.dim() || v1.dim() != x.size())
        throw std::invalid_argument("embedding_interference: dimension mismatch");
    const double sc = std::clamp(cosine_similarity(v1, v2), -1.0, 1.0);
    double dv_x = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        dv_x += (v1.values[i] - v2.values[i]) * x[i];
    const double dphi = -beta * std::acos(sc) + alpha * dv_x;
    return assemble(a1, a2, dphi);
}

} // namespace semwave
