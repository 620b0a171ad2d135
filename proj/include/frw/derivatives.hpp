#pragma once

#include <array>

#include "frw/grid.hpp"

namespace frw {

enum class Scheme { Spectral, Central4, Central2 };

const char* scheme_name(Scheme s);

// Partial derivative along one axis on the periodic box. Collapsed axes
// (n = 1) return a zero field. The spectral scheme zeroes the unpaired
// Nyquist mode on even-sized axes so derivatives of real fields stay real.
Field derivative(const Field& f, const Grid& grid, int axis, Scheme scheme);

// All three partials in one call; the spectral scheme reuses a single
// forward transform.
std::array<Field, 3> spatial_gradient(const Field& f, const Grid& grid,
                                      Scheme scheme);

// Index-space Laplacian sum_axes (f_{i+1} - 2 f_i + f_{i-1}); multiplied
// by a coefficient this is the (dx)^2-scaled artificial viscosity.
Field index_laplacian(const Field& f, const Grid& grid);

}  // namespace frw
