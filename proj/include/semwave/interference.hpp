#pragma once

#include <complex>
#include <vector>

#include "semwave/embedding.hpp"

namespace semwave {

// A exp(i(k.x - omega t + phase)): amplitude is the magnitude/phase at origin.
struct PlaneWave {
    double amplitude = 1.0;
    double phase = 0.0;
    std::vector<double> wavevector;
    double omega = 0.0;

    std::complex<double> eval(const std::vector<double>& x, double t) const;
};

struct InterferenceResult {
    double total = 0.0;
    double direct1 = 0.0;
    double direct2 = 0.0;
    double interference = 0.0;
};

// |psi1 + psi2|^2 decomposed as |A1|^2 + |A2|^2 + 2|A1||A2|cos(dphi).
InterferenceResult two_wave_intensity(const PlaneWave& w1, const PlaneWave& w2,
                                      const std::vector<double>& x, double t);

// Embedding-derived intensity:
//   A1^2 + A2^2 + 2 A1 A2 cos(-beta*arccos(S_C(v1,v2)) + alpha*(v1-v2).x)
// phi1 is fixed to 0.
InterferenceResult embedding_interference(const EmbeddingVector& v1, const EmbeddingVector& v2,
                                          double a1, double a2, double alpha, double beta,
                                          const std::vector<double>& x);

} // namespace semwave
