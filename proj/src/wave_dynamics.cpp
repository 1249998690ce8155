#include "semwave/wave_dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "semwave/fft.hpp"
#include "semwave/kernels.hpp"

namespace semwave {

void EvolutionConfig::validate(const GridSpec& grid) const {
    if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
    if (record_every < 1) throw std::invalid_argument("evolve: record_every must be >= 1");
    if (potential && potential->size() != grid.size())
        throw std::invalid_argument("evolve: potential grid does not match field grid");
    if (occupancy_split && grid.dims() != 1)
        throw std::invalid_argument("evolve: occupancy split requires a 1D field");
    if (grid.dims() > 2)
        throw std::invalid_argument("evolve: only 1D and 2D fields are supported");
}

double field_energy(const WaveField& field, const std::vector<double>* potential, double gamma) {
    const double dV = field.grid.cell_volume();
    double e = 0.0;
    for (std::size_t axis = 0; axis < field.grid.dims(); ++axis) {
        auto d = fft::derivative(field.grid, field.samples, axis);
        e += 0.5 * kern::abs2_sum(d.data(), d.size()) * dV;
    }
    std::vector<double> rho(field.samples.size());
    kern::abs2(field.samples.data(), rho.data(), rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (potential) e += (*potential)[i] * rho[i] * dV;
        e += 0.5 * gamma * rho[i] * rho[i] * dV;
    }
    return e;
}

namespace {

void record(const WaveField& field, const EvolutionConfig& cfg, ObservableSeries& series) {
    const double dV = field.grid.cell_volume();
    std::vector<double> rho(field.samples.size());
    kern::abs2(field.samples.data(), rho.data(), rho.size());
    double nrm = 0.0;
    for (double r : rho) nrm += r;
    nrm *= dV;
    if (!std::isfinite(nrm))
        throw std::runtime_error("evolve: non-finite samples at t = " +
                                 std::to_string(field.time));

    series.times.push_back(field.time);
    series.norm.push_back(nrm);
    series.energy.push_back(
        field_energy(field, cfg.potential ? &*cfg.potential : nullptr, cfg.gamma));

    if (series.mean_position.empty()) series.mean_position.resize(field.grid.dims());
    const std::size_t dims = field.grid.dims();
    std::vector<double> mean(dims, 0.0);
    std::size_t idx[3] = {0, 0, 0};
    for (std::size_t flat = 0; flat < rho.size(); ++flat) {
        for (std::size_t d = 0; d < dims; ++d)
            mean[d] += field.grid.axes[d].coord(idx[d]) * rho[flat];
        for (std::size_t d = dims; d-- > 0;) {
            if (++idx[d] < field.grid.axes[d].n) break;
            idx[d] = 0;
        }
    }
    for (std::size_t d = 0; d < dims; ++d)
        series.mean_position[d].push_back(mean[d] * dV / nrm);

    if (cfg.occupancy_split) {
        auto [pl, pr] = well_occupancy(field, *cfg.occupancy_split);
        series.p_left.push_back(pl);
        series.p_right.push_back(pr);
    }
}

} // namespace

std::pair<WaveField, ObservableSeries> evolve(const WaveField& input,
                                              const EvolutionConfig& config) {
    input.validate();
    config.validate(input.grid);

    WaveField field = input;
    ObservableSeries series;
    record(field, config, series);
    if (config.steps == 0) return {field, series};

    const auto k2 = fft::k_squared(field.grid);
    std::vector<cplx> half_kinetic(k2.size());
    for (std::size_t i = 0; i < k2.size(); ++i)
        half_kinetic[i] = std::polar(1.0, -k2[i] * config.dt / 4.0);

    std::vector<double> rho(field.samples.size());
    std::vector<cplx> point_factor(field.samples.size());

    for (std::size_t step = 1; step <= config.steps; ++step) {
        fft::forward(field.grid, field.samples);
        kern::cmul(field.samples.data(), half_kinetic.data(), field.samples.size());
        fft::inverse(field.grid, field.samples);

        kern::abs2(field.samples.data(), rho.data(), rho.size());
        for (std::size_t i = 0; i < rho.size(); ++i) {
            double v = config.gamma * rho[i];
            if (config.potential) v += (*config.potential)[i];
            point_factor[i] = std::polar(1.0, -v * config.dt);
        }
        kern::cmul(field.samples.data(), point_factor.data(), field.samples.size());

        fft::forward(field.grid, field.samples);
        kern::cmul(field.samples.data(), half_kinetic.data(), field.samples.size());
        fft::inverse(field.grid, field.samples);

        field.time += config.dt;
        if (step % config.record_every == 0 || step == config.steps)
            record(field, config, series);
    }
    return {field, series};
}

std::vector<std::pair<double, std::vector<double>>> stationary_states(
    const GridSpec& grid, const std::vector<double>& potential, std::size_t k) {
    grid.validate();
    if (grid.dims() != 1)
        throw std::invalid_argument("stationary_states: 1D grids only");
    const std::size_t n = grid.axes[0].n;
    if (potential.size() != n)
        throw std::invalid_argument("stationary_states: potential size mismatch");
    if (k < 1 || k > n)
        throw std::invalid_argument("stationary_states: k out of range");

    const double dx = grid.axes[0].spacing();
    const double diag_kin = 1.0 / (dx * dx);
    const double off = -0.5 / (dx * dx);

    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        H(ii, ii) = diag_kin + potential[i];
        const auto ip = static_cast<Eigen::Index>((i + 1) % n);
        H(ii, ip) = off;
        H(ip, ii) = off;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("stationary_states: eigensolver failed");

    std::vector<std::pair<double, std::vector<double>>> out;
    const double scale = 1.0 / std::sqrt(dx); // unit Euclidean -> unit L2 on the grid
    for (std::size_t j = 0; j < k; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        std::vector<double> vec(n);
        for (std::size_t i = 0; i < n; ++i)
            vec[i] = solver.eigenvectors()(static_cast<Eigen::Index>(i), jj) * scale;
        out.emplace_back(solver.eigenvalues()(jj), std::move(vec));
    }
    return out;
}

std::pair<double, double> well_occupancy(const WaveField& field, double split) {
    field.validate();
    if (field.grid.dims() != 1)
        throw std::invalid_argument("well_occupancy: 1D fields only");
    const auto& axis = field.grid.axes[0];
    double left = 0.0, total = 0.0;
    for (std::size_t i = 0; i < axis.n; ++i) {
        const double r = std::norm(field.samples[i]);
        total += r;
        if (axis.coord(i) < split) left += r;
    }
    if (total == 0.0) throw std::invalid_argument("well_occupancy: zero-norm field");
    return {left / total, 1.0 - left / total};
}

ChargeReport charge_conservation_report(const ObservableSeries& series, double tol) {
    if (series.norm.empty())
        throw std::invalid_argument("charge_conservation_report: empty series");
    ChargeReport report;
    report.conserved = true;
    const double n0 = series.norm.front();
    for (std::size_t i = 0; i < series.norm.size(); ++i) {
        const double d = std::abs(series.norm[i] - n0) / n0;
        report.drift.push_back(d);
        if (d > report.max_relative_drift) report.max_relative_drift = d;
        if (d >= tol && report.conserved) {
            report.conserved = false;
            report.first_violation = i;
        }
    }
    return report;
}

TunnelingResult tunneling_period(const DoubleWellParams& params, const GridSpec& grid,
                                 double dt, TunnelInit init) {
    params.validate();
    grid.validate();
    if (grid.dims() != 1)
        throw std::invalid_argument("tunneling_period: 1D grids only");

    const auto& axis = grid.axes[0];
    std::vector<double> potential(axis.n);
    for (std::size_t i = 0; i < axis.n; ++i)
        potential[i] = double_well_eval(params, axis.coord(i));

    auto states = stationary_states(grid, potential, 2);
    TunnelingResult res;
    res.e0 = states[0].first;
    res.e1 = states[1].first;
    res.barrier = params.barrier_height();
    if (res.e0 >= res.barrier || res.e1 >= res.barrier)
        throw std::runtime_error("tunneling_period: lowest states lie above the barrier; "
                                 "not a tunneling regime");
    const double de = res.e1 - res.e0;
    if (!(de > 0.0)) throw std::runtime_error("tunneling_period: degenerate doublet");
    res.spectral = std::numbers::pi / de;

    WaveField field;
    field.grid = grid;
    field.samples.resize(axis.n);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < axis.n; ++i) {
        const double a = states[0].second[i], b = states[1].second[i];
        field.samples[i] = init == TunnelInit::symmetric_ground
                               ? cplx(a, 0.0)
                               : cplx((a - b) * inv_sqrt2, 0.0);
    }
    if (init == TunnelInit::left_localized) {
        // pick the sign combination localized at x < 0
        auto [pl, pr] = well_occupancy(field, 0.0);
        if (pl < pr)
            for (std::size_t i = 0; i < axis.n; ++i) {
                const double a = states[0].second[i], b = states[1].second[i];
                field.samples[i] = cplx((a + b) * inv_sqrt2, 0.0);
            }
    }

    EvolutionConfig cfg;
    cfg.dt = dt;
    cfg.record_every = std::max<std::size_t>(1, static_cast<std::size_t>(0.01 / dt));
    cfg.potential = potential;
    cfg.occupancy_split = 0.0;
    // one and a quarter full oscillations is enough to see the maximum return
    cfg.steps = static_cast<std::size_t>(std::ceil(2.5 * 2.0 * res.spectral / dt));

    auto [final_field, series] = evolve(field, cfg);
    (void)final_field;

    // p_left(t) oscillates as (1 + cos(dE t))/2; locate the first local
    // minimum and the first local maximum after it. The measured tunneling
    // (transfer) period is half the max-return time.
    const auto& p = series.p_left;
    std::size_t imin = 0;
    bool found_min = false;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        if (p[i] <= p[i - 1] && p[i] <= p[i + 1] && p[0] - p[i] > 1e-3) {
            imin = i;
            found_min = true;
            break;
        }
    }
    if (!found_min)
        throw std::runtime_error("tunneling_period: no occupancy oscillation detected");
    for (std::size_t i = imin + 1; i + 1 < p.size(); ++i) {
        if (p[i] >= p[i - 1] && p[i] >= p[i + 1] && p[i] - p[imin] > 1e-3) {
            res.measured = series.times[i] / 2.0;
            return res;
        }
    }
    throw std::runtime_error("tunneling_period: occupancy maximum did not return in time");
}

} // namespace semwave
