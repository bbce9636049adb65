#pragma once

#include "evo/heat.hpp"

namespace evo {

/// Method-of-lines oracle for du/dt = delta(t) u_xx + alpha(t) u + reaction(t, u)
/// on the grid (zero Dirichlet boundary): second-order centered space,
/// trapezoidal time stepping with fixed-point correction of the reaction.
/// Starts from zero data at t0 (far enough in the past that the dichotomy has
/// forgotten the initial condition) and returns the trajectory restricted to
/// [T0, T1] as a grid-backed signal. Throws ConvergenceError on per-step norm
/// growth beyond the coefficient bound.
TimeSignal fd_oracle(const SpatialGrid& grid, const HeatCoefficients& coeffs,
                     const std::function<Vec(double, const Vec&)>& reaction,
                     double t0, double T0, double T1, double dt);

/// Same, with the reaction a0(t) g(u) taken from a Sec4Nonlinearity.
TimeSignal fd_oracle(const SpatialGrid& grid, const HeatCoefficients& coeffs,
                     const Sec4Nonlinearity& nl, double t0, double T0, double T1,
                     double dt);

}  // namespace evo
