#include "semwave/gauge.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "semwave/kernels.hpp"

namespace semwave {

void RealField::validate() const {
    grid.validate();
    if (values.size() != grid.size())
        throw std::invalid_argument("real field: size does not match grid");
}

void VectorPotentialField::validate() const {
    grid.validate();
    if (components.size() != grid.dims())
        throw std::invalid_argument("vector potential: one component per axis required");
    for (const auto& c : components)
        if (c.size() != grid.size())
            throw std::invalid_argument("vector potential: component size mismatch");
}

double ActionBreakdown::sum_present() const {
    double s = 0.0;
    for (const auto& t : {time_kinetic, gradient, scalar_coupling, current_interaction,
                          density_interaction, field_strength, nonlinear, coulomb_nonlocal})
        if (t) s += *t;
    return s;
}

double greens_function(const GreensSpec& spec, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("greens_function: r must be positive");
    if (spec.dim < 1) throw std::invalid_argument("greens_function: dimension must be >= 1");
    if (spec.dim == 1) return -r / 2.0;
    if (spec.dim == 2) return -std::log(r) / (2.0 * std::numbers::pi);
    const double n = static_cast<double>(spec.dim);
    double g = std::tgamma(n / 2.0) /
               (2.0 * (n - 2.0) * std::pow(std::numbers::pi, n / 2.0) * std::pow(r, n - 2.0));
    if (spec.sign == GreensSign::flipped) g = -g;
    return g;
}

RealField solve_scalar_potential(const RealField& density, const GreensSpec& spec) {
    density.validate();
    if (density.grid.dims() != spec.dim)
        throw std::invalid_argument("solve_scalar_potential: grid dims do not match spec");
    for (double v : density.values)
        if (!std::isfinite(v))
            throw std::invalid_argument("solve_scalar_potential: non-finite density");

    std::vector<cplx> work(density.values.begin(), density.values.end());
    fft::forward(density.grid, work);
    const auto k2 = fft::k_squared(density.grid);
    work[0] = 0.0; // zero-mean gauge: solution defined up to a constant
    for (std::size_t i = 1; i < work.size(); ++i) work[i] /= k2[i];
    fft::inverse(density.grid, work);

    RealField out;
    out.grid = density.grid;
    out.values.resize(work.size());
    for (std::size_t i = 0; i < work.size(); ++i) out.values[i] = work[i].real();
    return out;
}

CurrentField semantic_current(const WaveField& field, fft::DiffScheme scheme) {
    field.validate();
    CurrentField current;
    current.grid = field.grid;
    for (std::size_t axis = 0; axis < field.grid.dims(); ++axis) {
        auto d = fft::derivative(field.grid, field.samples, axis, scheme);
        std::vector<double> comp(d.size());
        // J = psi* dpsi - psi dpsi* = 2i Im(psi* dpsi); store the imaginary part
        for (std::size_t i = 0; i < d.size(); ++i)
            comp[i] = 2.0 * std::imag(std::conj(field.samples[i]) * d[i]);
        current.components.push_back(std::move(comp));
    }
    return current;
}

std::pair<double, bool> divergence_check(const VectorPotentialField& a, double tol,
                                         fft::DiffScheme scheme) {
    a.validate();
    std::vector<double> div(a.grid.size(), 0.0);
    for (std::size_t axis = 0; axis < a.grid.dims(); ++axis) {
        auto d = fft::derivative(a.grid, a.components[axis], axis, scheme);
        for (std::size_t i = 0; i < div.size(); ++i) div[i] += d[i];
    }
    double mx = 0.0;
    for (double v : div) mx = std::max(mx, std::abs(v));
    return {mx, mx < tol};
}

namespace {

// Minimum-image Euclidean separation between two flat cell indices.
double min_image_distance(const GridSpec& grid, std::size_t i, std::size_t j) {
    double d2 = 0.0;
    for (std::size_t dax = grid.dims(); dax-- > 0;) {
        const auto& axis = grid.axes[dax];
        const auto a = i % axis.n;
        const auto b = j % axis.n;
        i /= axis.n;
        j /= axis.n;
        double d = std::abs(static_cast<double>(a) - static_cast<double>(b)) * axis.spacing();
        d = std::min(d, axis.extent() - d);
        d2 += d * d;
    }
    return std::sqrt(d2);
}

} // namespace

double coulomb_interaction(const WaveField& field, const GreensSpec& spec,
                           std::size_t cell_cap) {
    field.validate();
    const std::size_t m = field.grid.size();
    if (m > cell_cap)
        throw std::invalid_argument("coulomb_interaction: grid exceeds cell cap (" +
                                    std::to_string(m) + " > " + std::to_string(cell_cap) + ")");
    std::vector<double> rho(m);
    kern::abs2(field.samples.data(), rho.data(), m);
    const double dv = field.grid.cell_volume();

    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (rho[i] == 0.0) continue;
        for (std::size_t j = i + 1; j < m; ++j) {
            if (rho[j] == 0.0) continue;
            acc += rho[i] * rho[j] * greens_function(spec, min_image_distance(field.grid, i, j));
        }
    }
    // the double sum counts each unordered pair twice; the diagonal is excluded
    return -acc * dv * dv;
}

namespace {

double integrate(const std::vector<double>& values, double dv) {
    double s = 0.0;
    for (double v : values) s += v;
    return s * dv;
}

} // namespace

ActionBreakdown lagrangian_terms(const WaveField& field_now, const WaveField* field_prev,
                                 double dt, const RealField* a0,
                                 const VectorPotentialField* a, const NonlinearSpec& nl,
                                 const GreensSpec& spec, bool include_nonlocal,
                                 fft::DiffScheme scheme) {
    field_now.validate();
    const GridSpec& grid = field_now.grid;
    const std::size_t m = grid.size();
    const double dv = grid.cell_volume();

    if (field_prev) {
        field_prev->validate();
        if (field_prev->grid != grid)
            throw std::invalid_argument("lagrangian_terms: snapshot grids differ");
        if (!(dt > 0.0)) throw std::invalid_argument("lagrangian_terms: dt must be positive");
    }
    if (a0) {
        a0->validate();
        if (a0->grid != grid)
            throw std::invalid_argument("lagrangian_terms: A0 grid mismatch");
    }
    if (a) {
        a->validate();
        if (a->grid != grid)
            throw std::invalid_argument("lagrangian_terms: A grid mismatch");
    }

    ActionBreakdown out;
    std::vector<double> rho(m);
    kern::abs2(field_now.samples.data(), rho.data(), m);

    // (i/2)(psi* d0 psi - psi d0 psi*) = -Im(psi* d0 psi), backward difference
    if (field_prev) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const cplx d0 = (field_now.samples[i] - field_prev->samples[i]) / dt;
            acc += -std::imag(std::conj(field_now.samples[i]) * d0);
        }
        out.time_kinetic = acc * dv;
    }

    // -1/2 sum_i |d_i psi|^2, plus the A-coupled pieces which share the
    // derivatives: -(i/2) A_i J_i = +A_i Im(psi* d_i psi)
    {
        double grad = 0.0, current = 0.0;
        for (std::size_t axis = 0; axis < grid.dims(); ++axis) {
            auto d = fft::derivative(grid, field_now.samples, axis, scheme);
            grad += -0.5 * kern::abs2_sum(d.data(), m);
            if (a)
                for (std::size_t i = 0; i < m; ++i)
                    current += a->components[axis][i] *
                               std::imag(std::conj(field_now.samples[i]) * d[i]);
        }
        out.gradient = grad * dv;
        if (a) out.current_interaction = current * dv;
    }

    if (a0) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += a0->values[i] * rho[i];
        out.scalar_coupling = acc * dv;
    }

    if (a) {
        double acc = 0.0;
        for (std::size_t axis = 0; axis < grid.dims(); ++axis)
            for (std::size_t i = 0; i < m; ++i)
                acc += a->components[axis][i] * a->components[axis][i] * rho[i];
        out.density_interaction = -0.5 * acc * dv;

        // -1/4 F_ij F_ij (spatial only; A is a static input) = -1/2 sum_{i<j} F_ij^2
        double fs = 0.0;
        for (std::size_t i = 0; i < grid.dims(); ++i) {
            for (std::size_t j = i + 1; j < grid.dims(); ++j) {
                auto didj = fft::derivative(grid, a->components[j], i, scheme);
                auto djdi = fft::derivative(grid, a->components[i], j, scheme);
                for (std::size_t x = 0; x < m; ++x) {
                    const double f = didj[x] - djdi[x];
                    fs += f * f;
                }
            }
        }
        out.field_strength = -0.5 * fs * dv;
    }

    switch (nl.kind) {
        case NonlinearKind::none:
            break;
        case NonlinearKind::cubic: {
            double acc = 0.0;
            for (double r : rho) acc += r * r;
            out.nonlinear = -0.5 * nl.gamma * acc * dv;
            break;
        }
        case NonlinearKind::mexican_hat: {
            double acc = 0.0;
            for (double r : rho) acc += nl.mh.mu2 * r - 2.0 * nl.mh.lambda * r * r;
            out.nonlinear = acc * dv;
            break;
        }
    }

    if (include_nonlocal) out.coulomb_nonlocal = coulomb_interaction(field_now, spec);

    out.total = out.sum_present();
    return out;
}

EffectiveAction effective_action(const std::vector<WaveField>& trajectory, const RealField* a0,
                                 const VectorPotentialField* a, const NonlinearSpec& nl,
                                 const GreensSpec& spec, bool include_nonlocal,
                                 fft::DiffScheme scheme) {
    if (trajectory.size() < 2)
        throw std::invalid_argument("effective_action: need at least 2 snapshots");
    const double dt = trajectory[1].time - trajectory[0].time;
    if (!(dt > 0.0))
        throw std::invalid_argument("effective_action: snapshots must advance in time");
    for (std::size_t j = 1; j < trajectory.size(); ++j) {
        const double step = trajectory[j].time - trajectory[j - 1].time;
        if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw std::invalid_argument("effective_action: nonuniform snapshot spacing");
    }

    EffectiveAction result;
    auto add = [](std::optional<double>& acc, const std::optional<double>& term, double w) {
        if (term) acc = acc.value_or(0.0) + w * *term;
    };
    for (std::size_t j = 1; j < trajectory.size(); ++j) {
        auto terms = lagrangian_terms(trajectory[j], &trajectory[j - 1], dt, a0, a, nl, spec,
                                      include_nonlocal, scheme);
        auto& acc = result.accumulated;
        add(acc.time_kinetic, terms.time_kinetic, dt);
        add(acc.gradient, terms.gradient, dt);
        add(acc.scalar_coupling, terms.scalar_coupling, dt);
        add(acc.current_interaction, terms.current_interaction, dt);
        add(acc.density_interaction, terms.density_interaction, dt);
        add(acc.field_strength, terms.field_strength, dt);
        add(acc.nonlinear, terms.nonlinear, dt);
        add(acc.coulomb_nonlocal, terms.coulomb_nonlocal, dt);
        result.total += dt * terms.total;
    }
    result.accumulated.total = result.accumulated.sum_present();
    return result;
}

} // namespace semwave
