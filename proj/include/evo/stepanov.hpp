#pragma once

#include <span>
#include <utility>
#include <vector>

#include "evo/measure.hpp"
#include "evo/signal.hpp"

namespace evo {

/// Exponent pair for the Stepanov scale. The conjugate q with 1/p + 1/q = 1
/// is stored as an explicit infinity flag when p = 1; the p = 1 estimates use
/// a separate chain throughout (no Hoelder factor).
class StepanovParams {
public:
    explicit StepanovParams(double p = 1.0, int window_nodes = 64);

    double p() const { return p_; }
    bool q_infinite() const { return q_inf_; }
    /// Conjugate exponent; invalid to call when q_infinite().
    double q() const;
    int window_nodes() const { return window_nodes_; }

private:
    double p_;
    double q_;
    bool q_inf_;
    int window_nodes_;
};

/// p-mean of |f| over the unit window [t, t+1], by composite Simpson with
/// params.window_nodes panels.
double window_p_mean(const TimeSignal& f, double t, const StepanovParams& params);

/// Max of window p-means over the grid of window starts
/// {t_range.lo, t_range.lo + grid_step, ...}. This is a lower approximation
/// of the Stepanov sup restricted to t_range.
double stepanov_norm(const TimeSignal& f, const StepanovParams& params,
                     Interval t_range, double grid_step);

/// (1 / mu([-r, r])) * integral of |f| dmu over [-r, r], composite quadrature
/// at grid_step for numerator and denominator alike.
double ergodic_mean(const TimeSignal& f, const WeightedMeasure& mu, double r,
                    double grid_step);

/// Weighted mean of window p-means over [-r, r].
double stepanov_ergodic_mean(const TimeSignal& f, const WeightedMeasure& mu,
                             const StepanovParams& params, double r, double grid_step);

/// Windowed p-defect of the shift tau:
/// max over window starts of (int_t^{t+1} |f(s+tau) - f(s)|^p ds)^{1/p}.
double shift_defect(const TimeSignal& f, double tau, const StepanovParams& params,
                    Interval t_range, double grid_step = 0.05);

/// Max over sample pairs of |F(t+tau, s+tau) - F(t, s)| in the given norm.
double bi_shift_defect(const std::function<Vec(double, double)>& F,
                       const StateSpace& space, double tau,
                       std::span<const std::pair<double, double>> pairs);

/// Signal t -> f(t, u(t)). When both f and u carry class metadata the result
/// is tagged SpMuPAA (composition theorem bookkeeping; nothing is proved
/// numerically). lip_modulus participates only in that bookkeeping.
TimeSignal compose(const TimeDependentMap& f, const TimeSignal& u,
                   const TimeSignal* lip_modulus = nullptr);

/// Max over probe intervals A of mu(A + tau) / mu(A): a finite-sample
/// estimate of the constant beta in hypothesis (M).
double measure_translation_diagnostic(const WeightedMeasure& mu, double tau,
                                      std::span<const Interval> probes);

/// Denominators of the continued-fraction convergents of ratio, capped at
/// q_max.
std::vector<long> convergent_denominators(double ratio, long q_max);

/// Searches q <= q_max minimizing max_i dist(q * ratios[i], Z) over
/// continued-fraction convergent denominators plus a small brute scan;
/// returns base * q (candidate simultaneous near-period).
double find_near_period(std::span<const double> ratios, long q_max, double base,
                        long* q_out = nullptr);

}  // namespace evo
