#pragma once

#include <vector>

#include "evo/green_solver.hpp"

namespace evo {

/// Semilinear problem u' = A(t)u + f(t, u) with Stepanov-Lipschitz
/// nonlinearity: |f(t,x) - f(t,y)| <= lip_modulus(t) |x - y|. lip_norm must
/// be an upper bound for |L_f|_{BS^p}; forcing_sup_bound, when positive, is
/// an analytic bound for sup_t |f(t, x)| over all reachable states and is
/// used for the inner truncation certificates instead of per-sweep probes.
struct SemilinearProblem {
    GreenFunction green;
    TimeDependentMap f;
    TimeSignal lip_modulus;
    StepanovParams stepanov{1.0};
    double lip_norm = 0.0;
    double forcing_sup_bound = 0.0;
    bool measure_satisfies_M = false;
};

/// The two bracketed kernel constants of the smallness condition. For p > 1
/// the first bracket is 2M (2/(q delta))^{1/q} (1/(1-e^{-delta/2}))^{1/p};
/// its p = 1 limit is 2M/(1-e^{-delta/2}). The second bracket is
/// 2M/(1-e^{-delta}). The contraction estimate uses the min of the two
/// (conservative; both are reported).
struct ContractionReport {
    double kappa = 0.0;        ///< lip_norm * min_expression
    double threshold = 0.0;    ///< 1 / min_expression
    bool admissible = false;   ///< kappa < 1
    double bracket_holder = 0.0;  ///< first (Hoelder-chain) bracket
    double bracket_plain = 0.0;   ///< second bracket, 2M/(1-e^{-delta})
    double min_expression = 0.0;
};

ContractionReport contraction_factor(const DichotomyConstants& c,
                                     const StepanovParams& params, double lip_norm);

struct UniformGrid {
    double t0 = 0.0;
    double t1 = 1.0;
    int count = 2;  ///< number of grid points (>= 2)
    double step() const { return (t1 - t0) / (count - 1); }
    double time(int i) const { return t0 + step() * i; }
};

struct IterationTrace {
    std::vector<TimeSignal> iterates;   ///< iterates[0] is u0 (grid-backed)
    std::vector<double> sup_deltas;     ///< grid sup-norm of successive diffs
    bool converged = false;
    ContractionReport report;
    int n_windows_used = 0;
};

/// Picard iteration for the fixed point of Fu(t) = int Gamma(t,s) f(s,u(s)) ds.
/// Iterates live on the grid; between grid points cubic interpolation, beyond
/// it constant extension. Requires an admissible contraction report unless
/// override_admissibility is set (then divergence is detected and reported).
IterationTrace picard_iterate(const SemilinearProblem& prob, const SeriesControl& ctrl,
                              const UniformGrid& grid, const TimeSignal& u0,
                              int max_iter, double tol,
                              bool override_admissibility = false);

/// Max variation-of-constants residual of u over the (s, t) pairs with
/// forcing r -> f(r, u(r)).
double residual_check(const SemilinearProblem& prob, const TimeSignal& u,
                      std::span<const std::pair<double, double>> pairs, int nodes);

/// Sampled Lipschitz check for the declared modulus; throws HypothesisError
/// on violation. Probes use random times in t_range and random state pairs
/// with entries in [-amplitude, amplitude].
void validate_lipschitz(const SemilinearProblem& prob, Interval t_range,
                        double amplitude, int n_probes, unsigned seed);

}  // namespace evo
