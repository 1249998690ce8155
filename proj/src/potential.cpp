#include "semwave/potential.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "semwave/rng.hpp"

namespace semwave {

void DoubleWellParams::validate() const {
    if (!(c > 0.0) || !(v > 0.0))
        throw std::invalid_argument("double well: c and v must be positive");
}

void MexicanHatParams::validate() const {
    if (!(mu2 > 0.0) || !(lambda > 0.0))
        throw std::invalid_argument("mexican hat: mu2 and lambda must be positive");
}

double double_well_eval(const DoubleWellParams& params, double x) {
    const double u = x * x - params.v * params.v;
    return params.c * u * u;
}

double mexican_hat_eval(const MexicanHatParams& params, std::complex<double> psi) {
    const double r2 = std::norm(psi);
    return -params.mu2 * r2 + 2.0 * params.lambda * r2 * r2;
}

double vacuum_magnitude(const MexicanHatParams& params) {
    params.validate();
    return std::sqrt(params.mu2 / (4.0 * params.lambda));
}

double stated_vacuum_magnitude(const MexicanHatParams& params) {
    params.validate();
    return std::sqrt(params.mu2 / (2.0 * params.lambda));
}

VacuumState break_symmetry(const MexicanHatParams& params, std::uint64_t seed) {
    VacuumState vac;
    vac.magnitude = vacuum_magnitude(params);
    vac.theta = 2.0 * std::numbers::pi * rng::uniform01(seed, 0);
    return vac;
}

PotentialGrid sample_grid(PotentialKind kind, const DoubleWellParams* dw,
                          const MexicanHatParams* mh, double lo, double hi, std::size_t n) {
    if (!(lo < hi)) throw std::invalid_argument("sample_grid: need lo < hi");
    if (n < 2) throw std::invalid_argument("sample_grid: need n >= 2");
    PotentialGrid grid;
    grid.xs.resize(n);
    grid.values.resize(n);
    const double dx = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = i + 1 == n ? hi : lo + dx * static_cast<double>(i);
        grid.xs[i] = x;
        switch (kind) {
            case PotentialKind::double_well:
                if (!dw) throw std::invalid_argument("sample_grid: missing double-well params");
                grid.values[i] = double_well_eval(*dw, x);
                break;
            case PotentialKind::mexican_hat_radial:
                if (!mh) throw std::invalid_argument("sample_grid: missing mexican-hat params");
                grid.values[i] = mexican_hat_eval(*mh, {x, 0.0});
                break;
        }
    }
    return grid;
}

} // namespace semwave
