#ifndef NOVSYM_FIXTURES_HPP
#define NOVSYM_FIXTURES_HPP

#include "novsym/jetspace.hpp"
#include "novsym/symmetry.hpp"

namespace novsym {

/// u_t - u_txx + 4 u^2 u_x - 3 u u_x u_xx - u^2 u_xxx = 0, solved for u_txx.
const Equation& novikov();

/// u_t + 2 kappa u_x - u_txx + 3 u u_x - 2 u_x u_xx - u u_xxx = 0, with
/// symbolic kappa; used as a self-adjointness cross-check only.
const Equation& camassa_holm();

/// The five-generator point symmetry basis of the Novikov equation:
///   X1 = d/dt, X2 = d/dx,
///   X3 = e^{2x} d/dx + e^{2x} u d/du,
///   X4 = e^{-2x} d/dx - e^{-2x} u d/du,
///   X5 = -2t d/dt + u d/du.
const std::vector<VectorField>& novikov_basis();

/// u d/du: not a symmetry of the Novikov equation; negative-control field.
const VectorField& scaling_u_field();

}  // namespace novsym

#endif
