#include "semwave/fft.hpp"

#include <mutex>
#include <numbers>

#include <fftw3.h>

namespace semwave::fft {

namespace {

std::mutex& plan_mutex() {
    static std::mutex m; // FFTW planning is not thread-safe
    return m;
}

void run_dft(const GridSpec& grid, std::vector<cplx>& data, int sign) {
    grid.validate();
    if (data.size() != grid.size())
        throw std::invalid_argument("fft: data size does not match grid");
    int n[3];
    for (std::size_t d = 0; d < grid.dims(); ++d) n[d] = static_cast<int>(grid.axes[d].n);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard lock(plan_mutex());
        plan = fftw_plan_dft(static_cast<int>(grid.dims()), n, ptr, ptr, sign,
                             FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
}

} // namespace

void forward(const GridSpec& grid, std::vector<cplx>& data) {
    run_dft(grid, data, FFTW_FORWARD);
}

void inverse(const GridSpec& grid, std::vector<cplx>& data) {
    run_dft(grid, data, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& z : data) z *= scale;
}

namespace {

// Signed angular wavenumber for mode index m on an axis of n samples.
double mode_k(std::size_t m, std::size_t n, double extent) {
    const auto mi = static_cast<std::ptrdiff_t>(m);
    const auto ni = static_cast<std::ptrdiff_t>(n);
    const std::ptrdiff_t signed_m = mi <= ni / 2 ? mi : mi - ni;
    return 2.0 * std::numbers::pi * static_cast<double>(signed_m) / extent;
}

template <typename F>
void for_each_mode(const GridSpec& grid, F&& fn) {
    const std::size_t dims = grid.dims();
    std::size_t idx[3] = {0, 0, 0};
    const std::size_t total = grid.size();
    for (std::size_t flat = 0; flat < total; ++flat) {
        fn(flat, idx);
        for (std::size_t d = dims; d-- > 0;) {
            if (++idx[d] < grid.axes[d].n) break;
            idx[d] = 0;
        }
    }
}

} // namespace

std::vector<double> k_squared(const GridSpec& grid) {
    std::vector<double> out(grid.size());
    for_each_mode(grid, [&](std::size_t flat, const std::size_t* idx) {
        double s = 0.0;
        for (std::size_t d = 0; d < grid.dims(); ++d) {
            const double k = mode_k(idx[d], grid.axes[d].n, grid.axes[d].extent());
            s += k * k;
        }
        out[flat] = s;
    });
    return out;
}

std::vector<double> k_axis(const GridSpec& grid, std::size_t axis) {
    std::vector<double> out(grid.size());
    for_each_mode(grid, [&](std::size_t flat, const std::size_t* idx) {
        out[flat] = mode_k(idx[axis], grid.axes[axis].n, grid.axes[axis].extent());
    });
    return out;
}

std::vector<cplx> derivative(const GridSpec& grid, const std::vector<cplx>& data,
                             std::size_t axis, DiffScheme scheme) {
    grid.validate();
    if (axis >= grid.dims()) throw std::invalid_argument("derivative: axis out of range");
    if (data.size() != grid.size())
        throw std::invalid_argument("derivative: data size does not match grid");

    if (scheme == DiffScheme::spectral) {
        std::vector<cplx> out = data;
        forward(grid, out);
        const auto ks = k_axis(grid, axis);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] *= cplx(0.0, ks[i]);
        inverse(grid, out);
        return out;
    }

    // second-order central differences with periodic wrap
    std::vector<cplx> out(data.size());
    const double inv2dx = 1.0 / (2.0 * grid.axes[axis].spacing());
    std::size_t stride = 1;
    for (std::size_t d = axis + 1; d < grid.dims(); ++d) stride *= grid.axes[d].n;
    const std::size_t n = grid.axes[axis].n;
    const std::size_t block = stride * n;
    for (std::size_t base = 0; base < data.size(); base += block) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t jp = (j + 1) % n, jm = (j + n - 1) % n;
            for (std::size_t s = 0; s < stride; ++s) {
                out[base + j * stride + s] =
                    (data[base + jp * stride + s] - data[base + jm * stride + s]) * inv2dx;
            }
        }
    }
    return out;
}

std::vector<double> derivative(const GridSpec& grid, const std::vector<double>& data,
                               std::size_t axis, DiffScheme scheme) {
    std::vector<cplx> tmp(data.begin(), data.end());
    auto dz = derivative(grid, tmp, axis, scheme);
    std::vector<double> out(dz.size());
    for (std::size_t i = 0; i < dz.size(); ++i) out[i] = dz[i].real();
    return out;
}

} // namespace semwave::fft
