#pragma once

#include <span>
#include <tuple>

#include "evo/measure.hpp"
#include "evo/picard.hpp"

namespace evo {

/// Uniform grid on [-L, L] with trapezoid quadrature weights; the state space
/// is the weighted discrete L2 space of nodal values (zero extension outside).
class SpatialGrid {
public:
    SpatialGrid(double L, int n_points);

    double L() const { return L_; }
    int n() const { return n_; }
    double h() const { return h_; }
    double x(int i) const { return -L_ + h_ * i; }
    const std::vector<double>& weights() const { return weights_; }
    const StateSpace& space() const { return space_; }

    /// Trapezoid integral of nodal values.
    double integrate(const Vec& phi) const;

private:
    double L_;
    int n_;
    double h_;
    std::vector<double> weights_;
    StateSpace space_;
};

struct HeatCoefficients {
    TimeSignal delta_sig;  ///< diffusion delta(t), scalar
    TimeSignal alpha_sig;  ///< reaction alpha(t), scalar
    double delta_floor = 0.0;  ///< delta(t) >= delta_floor > 0
    double omega = 0.0;        ///< alpha(t) <= -omega < 0
};

struct SemigroupApplyInfo {
    bool domain_too_small = false;  ///< sqrt(2 tau) > L/2
    double mass_in = 0.0;
    double mass_out = 0.0;
};

/// Discrete heat semigroup: Gaussian convolution with kernel variance 2*tau,
/// direct kernel quadrature truncated at 8 standard deviations, zero
/// extension outside [-L, L]. Kernels narrower than 2h are renormalized to
/// unit discrete mass so the operator stays a contraction as tau -> 0.
Vec heat_semigroup_apply(const SpatialGrid& grid, double tau, const Vec& phi,
                         SemigroupApplyInfo* info = nullptr);

/// Evolution family U(t,s) = e^{int_s^t alpha} T(int_s^t delta) on the grid;
/// P = I, M = 1, delta_dich = omega. Coefficient integrals are adaptive and
/// cached on unit-spaced anchors. Coefficient bound violations on the probe
/// grid are rejected.
std::shared_ptr<const DichotomyFamily> build_heat_family(
    const SpatialGrid& grid, const HeatCoefficients& coeffs,
    Interval probe_range = {-60.0, 60.0}, double probe_step = 0.05);

/// max over samples (t, s, phi) of |U(t+tau,s+tau)phi - U(t,s)phi| / (1+|phi|).
double bi_aa_family_defect(const DichotomyFamily& family, double tau,
                           std::span<const std::tuple<double, double, Vec>> samples);

/// Nonlinearity f(t, phi) = a0(t) g(phi) with a0(t) = a(t) + arctan(t) - pi/2
/// and |g(phi) - g(psi)| <= L_g |phi - psi|; L_f(t) = L_g |a0(t)|.
struct Sec4Nonlinearity {
    TimeSignal a_sig;  ///< scalar, the almost automorphic part of a0
    std::function<Vec(const Vec&)> g_map;
    double L_g = 0.0;

    double a0(double t) const;
    /// Scalar signal L_g |a0(t)|.
    TimeSignal lip_modulus() const;
};

/// Assembles the semilinear problem of the reaction-diffusion application.
/// lip_norm_override > 0 replaces the probed |L_f|_{BS^p} (+10% margin) over
/// lip_probe_range; forcing_sup_bound > 0 feeds the truncation certificates.
SemilinearProblem build_sec4_problem(const SpatialGrid& grid,
                                     const HeatCoefficients& coeffs,
                                     const Sec4Nonlinearity& nl,
                                     const WeightedMeasure& measure,
                                     StepanovParams params,
                                     double lip_norm_override = 0.0,
                                     double forcing_sup_bound = 0.0,
                                     Interval lip_probe_range = {-40.0, 40.0});

}  // namespace evo
