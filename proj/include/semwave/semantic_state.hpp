#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "semwave/embedding.hpp"

namespace semwave {

// Polar-form complex coefficient. Phase is kept canonical in [0, 2pi).
struct ComplexAmplitude {
    double magnitude = 0.0;
    double phase = 0.0;

    static ComplexAmplitude from_rect(std::complex<double> z);
    std::complex<double> rect() const;
    static double wrap_phase(double phi);
};

// Labeled superposition over a token basis, coefficients in polar form.
struct SemanticState {
    std::vector<std::string> basis_labels;
    std::vector<ComplexAmplitude> coefficients;
    bool normalized = false;

    void validate() const;
    double sum_sq_magnitude() const;
};

struct MeasurementRecord {
    std::vector<std::pair<std::string, std::uint64_t>> counts;

    std::uint64_t total() const;
};

enum class MagnitudeRule { softmax, clipped_cosine };

// Build a complex state for `target` over `basis`: phases beta*arccos(S_C),
// magnitudes from the chosen rule over the similarities, L2-normalized.
SemanticState complexify(const std::string& target, const std::vector<std::string>& basis,
                         const EmbeddingSet& set, double beta = 1.0,
                         MagnitudeRule rule = MagnitudeRule::softmax, double tau = 1.0);

SemanticState normalize(const SemanticState& state);

std::map<std::string, double> measure_probabilities(const SemanticState& state);

// Magnitudes sqrt(count/total); phases unobservable from frequencies, set to 0.
SemanticState estimate_amplitudes(const MeasurementRecord& record);

SemanticState apply_semantic_operator(const SemanticState& state,
                                      const std::map<std::string, ComplexAmplitude>& eigenvalues);

SemanticState perturb(const SemanticState& state,
                      const std::map<std::string, std::complex<double>>& deltas);

// S_T = sum conj(c1_i) c2_i over a shared basis.
ComplexAmplitude complex_similarity(const SemanticState& s1, const SemanticState& s2);

// JSON form: {basis: [...], coeffs: [[magnitude, phase]...], normalized: bool}
std::string to_json(const SemanticState& state);
SemanticState state_from_json(const std::string& text);

} // namespace semwave
