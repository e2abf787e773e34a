#ifndef KELAB_OPERATORS_HPP
#define KELAB_OPERATORS_HPP

#include <array>

#include "kelab/geometry.hpp"

namespace kelab {

/// Discrete complex Hessian (d^2/dz_j dzbar_k) of a cell field.
///
/// n = 1: compact second-order central differences (3-point plus the 4-point
///        cross term for non-rectangular tau); on the annulus the conformal
///        factor e^{-2u} is applied at cell centers and the two radial
///        boundary rings are left at zero.
/// n = 2: composed centered first differences in the complex chart
///        directions. The composed form has a rank-one symbol, which makes
///        the discrete Stokes identity exact: total masses of all mixed
///        Monge-Ampere measures are grid-exact conserved quantities.
HermitianField complex_hessian(const FiberGrid& g, const GridField& phi);

/// Holomorphic derivative d(phi)/dz_j per complex dimension (centered).
std::array<ComplexField, 2> complex_gradient(const FiberGrid& g, const GridField& phi);

/// y = w.*x - tr(Cof(M) . Hess(x)), the Monge-Ampere linearization at metric
/// coefficients M with zeroth-order weight w (both per cell). No masking;
/// callers zero inactive cells themselves.
void ma_linearized_apply(const FiberGrid& g, const HermitianField& M, const GridField& w,
                         const double* x, double* y);

/// Diagonal of the operator above (for Jacobi preconditioning).
GridField ma_linearized_diagonal(const FiberGrid& g, const HermitianField& M, const GridField& w);

/// Bilinear prolongation of a coarse cell field onto a finer grid of the same
/// chart (periodic in periodic axes, clamped radially on the annulus).
GridField prolong(const FiberGrid& coarse, const FiberGrid& fine, const GridField& field);

}  // namespace kelab

#endif
