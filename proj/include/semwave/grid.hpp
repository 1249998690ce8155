#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace semwave {

using cplx = std::complex<double>;

// One periodic axis: samples at lo + j*dx, j = 0..n-1, dx = (hi-lo)/n.
// The point hi is identified with lo.
struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t n = 0;

    double extent() const { return hi - lo; }
    double spacing() const { return (hi - lo) / static_cast<double>(n); }
    double coord(std::size_t j) const { return lo + spacing() * static_cast<double>(j); }

    bool operator==(const Axis&) const = default;
};

struct GridSpec {
    std::vector<Axis> axes;

    std::size_t dims() const { return axes.size(); }
    std::size_t size() const {
        std::size_t s = 1;
        for (const auto& a : axes) s *= a.n;
        return s;
    }
    double cell_volume() const {
        double v = 1.0;
        for (const auto& a : axes) v *= a.spacing();
        return v;
    }
    void validate() const {
        if (axes.empty() || axes.size() > 3)
            throw std::invalid_argument("grid must have 1 to 3 axes");
        for (const auto& a : axes) {
            if (a.n < 2) throw std::invalid_argument("axis needs at least 2 samples");
            if (!(a.hi > a.lo)) throw std::invalid_argument("axis extent must be positive");
        }
    }

    bool operator==(const GridSpec&) const = default;
};

// Complex samples on a periodic grid, row-major (last axis fastest).
struct WaveField {
    GridSpec grid;
    std::vector<cplx> samples;
    double time = 0.0;

    void validate() const {
        grid.validate();
        if (samples.size() != grid.size())
            throw std::invalid_argument("sample count does not match grid");
    }

    // sum |psi|^2 dV
    double norm() const;
};

// Snapshot I/O: <path>.json sidecar {dims, extents, counts, time} plus
// <path>.bin, little-endian float64 pairs (re, im) in row-major order.
void save_field(const WaveField& field, const std::filesystem::path& base);
WaveField load_field(const std::filesystem::path& base);

} // namespace semwave
