#pragma once

#include <array>
#include <stdexcept>

#include "frw/derivatives.hpp"
#include "frw/fluid_state.hpp"
#include "frw/grid.hpp"
#include "frw/scale_factor.hpp"

namespace frw {

// The sonic-normalization denominator 1 - c2 g_ab u^a u^b / (u0)^2 fell to
// the rounding floor; analytically impossible, so the state is corrupt.
class degenerate_state_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RhsFields {
    Field dL_dt;
    std::array<Field, 3> du_dt;
    Field triangle_prime0;  // time derivative of u0 along the flow
};

using Mat4 = std::array<std::array<double, 4>, 4>;

struct CoefficientMatrices {
    std::array<Mat4, 4> A;  // A[0] multiplies the time derivative
    Mat4 A0_inv;
    double detA0;
};

struct PointRhs {
    double dL_dt;
    std::array<double, 3> du_dt;
    double tri0;
};

// Isolated time derivatives at one point, given the spatial gradients
// gradL[a] = d_a L and gradu[a][j] = d_a u^j.
PointRhs rhs_point(const std::array<double, 3>& u,
                   const std::array<double, 3>& gradL,
                   const std::array<std::array<double, 3>, 3>& gradu,
                   double Omega, double omega, SoundSpeed c2);

// Full right side with the expansion evaluated at state.t. The optional
// artificial viscosity adds nu times the index-space Laplacian to du_dt.
RhsFields rhs(const FluidState& state, const ScaleFactorSpec& spec, SoundSpeed c2,
              Scheme scheme, double nu = 0.0);

// Same, with Omega and omega supplied directly (the flat-frame evolution
// passes zeros).
RhsFields rhs_with_expansion(const FluidState& state, double Omega, double omega,
                             SoundSpeed c2, Scheme scheme, double nu = 0.0);

// Pointwise coefficient matrices of the first-order system, with the
// closed-form inverse of A^0 and its determinant
// det(A^0) = (u0)^2 {(u0)^2 (1 - c2) + c2}.
CoefficientMatrices coefficient_matrices(const std::array<double, 3>& u,
                                         double Omega, SoundSpeed c2);

// Solves a 4x4 system by partial-pivot LU; returns false when a pivot
// vanishes. Used as an independent linear-solve oracle.
bool lu4_solve(Mat4 A, std::array<double, 4> b, std::array<double, 4>& x);

// Max-norm discrepancy, relative to the largest direct entry, between the
// isolated time derivatives and the pointwise solve of
// A^0 dt W = b - A^a d_a W.
double verify_matrix_form(const FluidState& state, const ScaleFactorSpec& spec,
                          SoundSpeed c2, Scheme scheme);

}  // namespace frw
