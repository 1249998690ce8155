#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "semwave/fft.hpp"
#include "semwave/grid.hpp"
#include "semwave/potential.hpp"

namespace semwave {

enum class GreensSign {
    standard, // fundamental solution of -laplacian G = delta (positive for N >= 3)
    flipped   // flips the sign of the N >= 3 branch
};

struct GreensSpec {
    unsigned dim = 3;
    GreensSign sign = GreensSign::standard;
};

struct RealField {
    GridSpec grid;
    std::vector<double> values;

    void validate() const;
};

struct VectorPotentialField {
    GridSpec grid;
    std::vector<std::vector<double>> components; // one array per axis

    void validate() const;
};

// J_i = psi* d_i psi - psi d_i psi* is purely imaginary; components hold the
// imaginary part, i.e. J_i = i * components[i].
struct CurrentField {
    GridSpec grid;
    std::vector<std::vector<double>> components;
};

struct ActionBreakdown {
    std::optional<double> time_kinetic;
    std::optional<double> gradient;
    std::optional<double> scalar_coupling;
    std::optional<double> current_interaction;
    std::optional<double> density_interaction;
    std::optional<double> field_strength;
    std::optional<double> nonlinear;
    std::optional<double> coulomb_nonlocal;
    double total = 0.0;

    double sum_present() const;
};

enum class NonlinearKind { none, cubic, mexican_hat };

struct NonlinearSpec {
    NonlinearKind kind = NonlinearKind::none;
    double gamma = 0.0;     // cubic
    MexicanHatParams mh{};  // mexican_hat
};

// Free-space Laplacian Green's function at separation r > 0.
double greens_function(const GreensSpec& spec, double r);

// Periodic Poisson solve for -laplacian A0 = density, zero-mean gauge.
RealField solve_scalar_potential(const RealField& density, const GreensSpec& spec);

CurrentField semantic_current(const WaveField& field,
                              fft::DiffScheme scheme = fft::DiffScheme::spectral);

// (max |d_i A_i| over the grid, max < tol)
std::pair<double, bool> divergence_check(const VectorPotentialField& a, double tol,
                                         fft::DiffScheme scheme = fft::DiffScheme::spectral);

// -1/2 sum_{x != x'} |psi(x)|^2 G(|x - x'|) |psi(x')|^2 dV^2 with the
// minimum-image separation; the singular diagonal cell is excluded.
double coulomb_interaction(const WaveField& field, const GreensSpec& spec,
                           std::size_t cell_cap = 16384);

ActionBreakdown lagrangian_terms(const WaveField& field_now, const WaveField* field_prev,
                                 double dt, const RealField* a0,
                                 const VectorPotentialField* a, const NonlinearSpec& nl,
                                 const GreensSpec& spec, bool include_nonlocal,
                                 fft::DiffScheme scheme = fft::DiffScheme::spectral);

struct EffectiveAction {
    ActionBreakdown accumulated; // per-term time integrals
    double total = 0.0;
};

// Time integration of lagrangian_terms totals over a uniformly spaced
// trajectory. Snapshot j >= 1 is paired with snapshot j-1 for the backward
// time difference and carries weight dt.
EffectiveAction effective_action(const std::vector<WaveField>& trajectory,
                                 const RealField* a0, const VectorPotentialField* a,
                                 const NonlinearSpec& nl, const GreensSpec& spec,
                                 bool include_nonlocal,
                                 fft::DiffScheme scheme = fft::DiffScheme::spectral);

} // namespace semwave
