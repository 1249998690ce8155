#pragma once

#include <vector>

#include "semwave/grid.hpp"

namespace semwave::fft {

// Unnormalized forward DFT over all grid axes (row-major layout).
void forward(const GridSpec& grid, std::vector<cplx>& data);
// Inverse DFT including the 1/size factor.
void inverse(const GridSpec& grid, std::vector<cplx>& data);

// |k|^2 at each flat mode index (angular wavenumbers 2*pi*m/L, signed).
std::vector<double> k_squared(const GridSpec& grid);
// Signed k value along one axis at each flat mode index.
std::vector<double> k_axis(const GridSpec& grid, std::size_t axis);

enum class DiffScheme { spectral, central };

// Partial derivative along an axis on the periodic grid.
std::vector<cplx> derivative(const GridSpec& grid, const std::vector<cplx>& data,
                             std::size_t axis, DiffScheme scheme = DiffScheme::spectral);
std::vector<double> derivative(const GridSpec& grid, const std::vector<double>& data,
                               std::size_t axis, DiffScheme scheme = DiffScheme::spectral);

} // namespace semwave::fft
