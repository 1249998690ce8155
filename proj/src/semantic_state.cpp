#include "semwave/semantic_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace semwave {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNormTol = 1e-10;
} // namespace

double ComplexAmplitude::wrap_phase(double phi) {
    double w = std::fmod(phi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0; // fmod can land exactly on 2pi after the add
    return w;
}

ComplexAmplitude ComplexAmplitude::from_rect(std::complex<double> z) {
    double mag = std::abs(z);
    double phase = mag == 0.0 ? 0.0 : wrap_phase(std::arg(z));
    return {mag, phase};
}

std::complex<double> ComplexAmplitude::rect() const {
    return std::polar(magnitude, phase);
}

void SemanticState::validate() const {
    if (basis_labels.size() != coefficients.size())
        throw std::invalid_argument("state: label/coefficient length mismatch");
    for (const auto& c : coefficients)
        if (c.magnitude < 0.0) throw std::invalid_argument("state: negative magnitude");
    if (normalized && std::abs(sum_sq_magnitude() - 1.0) > kNormTol)
        throw std::invalid_argument("state: flagged normalized but sum |c|^2 != 1");
}

double SemanticState::sum_sq_magnitude() const {
    double s = 0.0;
    for (const auto& c : coefficients) s += c.magnitude * c.magnitude;
    return s;
}

std::uint64_t MeasurementRecord::total() const {
    std::uint64_t t = 0;
    for (const auto& [label, count] : counts) t += count;
    return t;
}

SemanticState complexify(const std::string& target, const std::vector<std::string>& basis,
                         const EmbeddingSet& set, double beta, MagnitudeRule rule, double tau) {
    if (basis.empty()) throw std::invalid_argument("complexify: empty basis");
    const EmbeddingVector& tv = set.at(target);

    std::vector<double> sims(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
        sims[i] = std::clamp(cosine_similarity(tv, set.at(basis[i])), -1.0, 1.0);

    SemanticState state;
    state.basis_labels = basis;
    state.coefficients.resize(basis.size());

    std::vector<double> mags(basis.size());
    switch (rule) {
        case MagnitudeRule::softmax: {
            double smax = *std::max_element(sims.begin(), sims.end());
            double denom = 0.0;
            for (std::size_t i = 0; i < sims.size(); ++i) {
                mags[i] = std::exp((sims[i] - smax) / tau);
                denom += mags[i];
            }
            for (auto& m : mags) m /= denom;
            break;
        }
        case MagnitudeRule::clipped_cosine:
            for (std::size_t i = 0; i < sims.size(); ++i) mags[i] = std::max(sims[i], 0.0);
            break;
    }

    for (std::size_t i = 0; i < basis.size(); ++i) {
        state.coefficients[i].magnitude = mags[i];
        state.coefficients[i].phase =
            ComplexAmplitude::wrap_phase(beta * std::acos(sims[i]));
    }
    return normalize(state);
}

SemanticState normalize(const SemanticState& state) {
    state.validate();
    const double ss = state.sum_sq_magnitude();
    if (ss == 0.0)
        throw std::invalid_argument("normalize: all-zero state");
    SemanticState out = state;
    const double inv = 1.0 / std::sqrt(ss);
    for (auto& c : out.coefficients) c.magnitude *= inv;
    out.normalized = true;
    return out;
}

std::map<std::string, double> measure_probabilities(const SemanticState& state) {
    state.validate();
    if (!state.normalized)
        throw std::invalid_argument("measure_probabilities: state not normalized");
    std::map<std::string, double> probs;
    for (std::size_t i = 0; i < state.basis_labels.size(); ++i)
        probs[state.basis_labels[i]] =
            state.coefficients[i].magnitude * state.coefficients[i].magnitude;
    return probs;
}

SemanticState estimate_amplitudes(const MeasurementRecord& record) {
    const std::uint64_t total = record.total();
    if (total == 0) throw std::invalid_argument("estimate_amplitudes: zero total");
    SemanticState state;
    for (const auto& [label, count] : record.counts) {
        state.basis_labels.push_back(label);
        state.coefficients.push_back(
            {std::sqrt(static_cast<double>(count) / static_cast<double>(total)), 0.0});
    }
    state.normalized = true;
    return state;
}

SemanticState apply_semantic_operator(
    const SemanticState& state, const std::map<std::string, ComplexAmplitude>& eigenvalues) {
    state.validate();
    SemanticState out = state;
    for (std::size_t i = 0; i < out.basis_labels.size(); ++i) {
        auto it = eigenvalues.find(out.basis_labels[i]);
        if (it == eigenvalues.end())
            throw std::invalid_argument("apply_semantic_operator: missing eigenvalue for '" +
                                        out.basis_labels[i] + "'");
        out.coefficients[i].magnitude *= it->second.magnitude;
        out.coefficients[i].phase = out.coefficients[i].magnitude == 0.0
                                        ? 0.0
                                        : ComplexAmplitude::wrap_phase(
                                              out.coefficients[i].phase + it->second.phase);
    }
    out.normalized = std::abs(out.sum_sq_magnitude() - 1.0) <= kNormTol;
    return out;
}

SemanticState perturb(const SemanticState& state,
                      const std::map<std::string, std::complex<double>>& deltas) {
    state.validate();
    SemanticState out = state;
    for (std::size_t i = 0; i < out.basis_labels.size(); ++i) {
        auto it = deltas.find(out.basis_labels[i]);
        if (it == deltas.end()) continue;
        out.coefficients[i] =
            ComplexAmplitude::from_rect(out.coefficients[i].rect() + it->second);
    }
    out.normalized = false;
    return normalize(out);
}

ComplexAmplitude complex_similarity(const SemanticState& s1, const SemanticState& s2) {
    s1.validate();
    s2.validate();
    if (s1.basis_labels != s2.basis_labels)
        throw std::invalid_argument("complex_similarity: basis mismatch");
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < s1.coefficients.size(); ++i)
        acc += std::conj(s1.coefficients[i].rect()) * s2.coefficients[i].rect();
    return ComplexAmplitude::from_rect(acc);
}

std::string to_json(const SemanticState& state) {
    nlohmann::json j;
    j["basis"] = state.basis_labels;
    auto& coeffs = j["coeffs"] = nlohmann::json::array();
    for (const auto& c : state.coefficients) coeffs.push_back({c.magnitude, c.phase});
    j["normalized"] = state.normalized;
    return j.dump(2);
}

SemanticState state_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    SemanticState state;
    state.basis_labels = j.at("basis").get<std::vector<std::string>>();
    for (const auto& c : j.at("coeffs"))
        state.coefficients.push_back(
            {c.at(0).get<double>(), ComplexAmplitude::wrap_phase(c.at(1).get<double>())});
    state.normalized = j.at("normalized").get<bool>();
    state.validate();
    return state;
}

} // namespace semwave
