#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace semwave {

// V(x) = c (x^2 - v^2)^2, minima at x = +-v.
struct DoubleWellParams {
    double c = 1.0;
    double v = 1.0;

    void validate() const;
    double barrier_height() const { return c * v * v * v * v; } // V(0)
};

// V(psi) = -mu2 |psi|^2 + 2 lambda |psi|^4.
struct MexicanHatParams {
    double mu2 = 1.0;
    double lambda = 0.25;

    void validate() const;
};

struct VacuumState {
    double magnitude = 0.0;
    double theta = 0.0; // [0, 2pi)
};

struct PotentialGrid {
    std::vector<double> xs;     // uniform, endpoints inclusive
    std::vector<double> values;
};

double double_well_eval(const DoubleWellParams& params, double x);

double mexican_hat_eval(const MexicanHatParams& params, std::complex<double> psi);

// Analytic minimizer of the implemented potential: |psi| = sqrt(mu2 / (4 lambda)).
double vacuum_magnitude(const MexicanHatParams& params);

// Alternative convention sqrt(mu2 / (2 lambda)) sometimes quoted for this
// potential family. Inconsistent with the minimum of the form above; reported
// for diagnostics only.
double stated_vacuum_magnitude(const MexicanHatParams& params);

// Vacuum with theta drawn uniformly from the seeded counter-based generator.
VacuumState break_symmetry(const MexicanHatParams& params, std::uint64_t seed);

enum class PotentialKind { double_well, mexican_hat_radial };

PotentialGrid sample_grid(PotentialKind kind, const DoubleWellParams* dw,
                          const MexicanHatParams* mh, double lo, double hi, std::size_t n);

} // namespace semwave
