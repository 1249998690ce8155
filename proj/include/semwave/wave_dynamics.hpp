#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "semwave/grid.hpp"
#include "semwave/potential.hpp"

namespace semwave {

struct EvolutionConfig {
    double dt = 1e-3;
    std::size_t steps = 0;
    double gamma = 0.0;                          // cubic coupling, i dpsi/dt = ... + gamma |psi|^2 psi
    std::optional<std::vector<double>> potential;
    std::size_t record_every = 1;
    std::optional<double> occupancy_split;       // 1D only: record (p_left, p_right)

    void validate(const GridSpec& grid) const;
};

struct ObservableSeries {
    std::vector<double> times;
    std::vector<double> norm;
    std::vector<double> energy;
    std::vector<std::vector<double>> mean_position; // one list per axis
    std::vector<double> p_left;                     // present iff occupancy_split set
    std::vector<double> p_right;
};

struct ChargeReport {
    double max_relative_drift = 0.0;
    std::vector<double> drift;
    bool conserved = false;
    std::size_t first_violation = 0; // index into drift, valid when !conserved
};

// Strang split-step on the periodic grid: half kinetic step in spectral space
// (exp(-i |k|^2 dt / 4) per mode), full pointwise potential + nonlinear step
// (exp(-i (V + gamma |psi|^2) dt)), half kinetic step.
std::pair<WaveField, ObservableSeries> evolve(const WaveField& field,
                                              const EvolutionConfig& config);

// E = sum (1/2 |grad psi|^2 + V |psi|^2 + (gamma/2) |psi|^4) dV
double field_energy(const WaveField& field, const std::vector<double>* potential, double gamma);

// Lowest k eigenpairs of H = -1/2 D2 + diag(V) on a 1D periodic grid,
// eigenvectors L2-normalized (sum phi^2 dx = 1).
std::vector<std::pair<double, std::vector<double>>> stationary_states(
    const GridSpec& grid, const std::vector<double>& potential, std::size_t k);

std::pair<double, double> well_occupancy(const WaveField& field, double split);

ChargeReport charge_conservation_report(const ObservableSeries& series, double tol);

enum class TunnelInit { left_localized, symmetric_ground };

struct TunnelingResult {
    double measured = 0.0;   // half the first-return time of the left-well occupancy maximum
    double spectral = 0.0;   // pi / (E1 - E0)
    double e0 = 0.0;
    double e1 = 0.0;
    double barrier = 0.0;
};

TunnelingResult tunneling_period(const DoubleWellParams& params, const GridSpec& grid,
                                 double dt, TunnelInit init = TunnelInit::left_localized);

} // namespace semwave
