#include "evo/stepanov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "evo/quadrature.hpp"

namespace evo {

StepanovParams::StepanovParams(double p, int window_nodes)
    : p_(p), q_(0.0), q_inf_(p == 1.0), window_nodes_(window_nodes) {
    if (!(p >= 1.0)) throw ValidationError("StepanovParams: p must be >= 1");
    if (window_nodes < 2) throw ValidationError("StepanovParams: window_nodes must be >= 2");
    if (!q_inf_) q_ = p / (p - 1.0);
}

double StepanovParams::q() const {
    if (q_inf_) throw ValidationError("StepanovParams::q: q is infinite for p=1");
    return q_;
}

double window_p_mean(const TimeSignal& f, double t, const StepanovParams& params) {
    const StateSpace& space = f.space();
    const double p = params.p();
    const double integral = quad::simpson(
        [&](double s) { return std::pow(space.norm(f(s)), p); }, t, t + 1.0,
        params.window_nodes());
    return std::pow(std::max(integral, 0.0), 1.0 / p);
}

double stepanov_norm(const TimeSignal& f, const StepanovParams& params,
                     Interval t_range, double grid_step) {
    if (!(grid_step > 0.0)) throw ValidationError("stepanov_norm: grid_step must be > 0");
    if (!(t_range.hi >= t_range.lo)) throw ValidationError("stepanov_norm: empty t_range");
    double best = 0.0;
    const double end = t_range.hi + 0.5 * grid_step;
    for (double t = t_range.lo; t <= end; t += grid_step)
        best = std::max(best, window_p_mean(f, t, params));
    return best;
}

namespace {

// Shared composite rule for weighted ergodic means: numerator and denominator
// are evaluated on the same Simpson grid so their ratio is consistent.
double weighted_mean_on_grid(const std::function<double(double)>& value,
                             const WeightedMeasure& mu, double r, double grid_step) {
    if (!(r > 0.0)) throw ValidationError("ergodic mean: r must be > 0");
    if (!(grid_step > 0.0)) throw ValidationError("ergodic mean: grid_step must be > 0");
    int m = static_cast<int>(std::ceil(2.0 * r / grid_step));
    if (m < 2) m = 2;
    if (m % 2) ++m;
    const double h = 2.0 * r / m;
    double num = 0.0, den = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double t = -r + i * h;
        const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double rho = mu.density(t);
        den += w * rho;
        num += w * rho * value(t);
    }
    num *= h / 3.0;
    den *= h / 3.0;
    if (den <= 1e-12) {
        std::ostringstream os;
        os << "ergodic mean: degenerate measure, mu([-r,r]) = " << den << " at r=" << r;
        throw HypothesisError(os.str());
    }
    return num / den;
}

}  // namespace

double ergodic_mean(const TimeSignal& f, const WeightedMeasure& mu, double r,
                    double grid_step) {
    const StateSpace& space = f.space();
    return weighted_mean_on_grid([&](double t) { return space.norm(f(t)); }, mu, r,
                                 grid_step);
}

double stepanov_ergodic_mean(const TimeSignal& f, const WeightedMeasure& mu,
                             const StepanovParams& params, double r, double grid_step) {
    return weighted_mean_on_grid([&](double t) { return window_p_mean(f, t, params); },
                                 mu, r, grid_step);
}

double shift_defect(const TimeSignal& f, double tau, const StepanovParams& params,
                    Interval t_range, double grid_step) {
    if (tau == 0.0) return 0.0;
    const StateSpace& space = f.space();
    TimeSignal diff(space, [f, tau](double s) { return vec_diff(f(s + tau), f(s)); });
    return stepanov_norm(diff, params, t_range, grid_step);
}

double bi_shift_defect(const std::function<Vec(double, double)>& F,
                       const StateSpace& space, double tau,
                       std::span<const std::pair<double, double>> pairs) {
    if (pairs.empty()) throw ValidationError("bi_shift_defect: no sample pairs");
    double best = 0.0;
    for (const auto& [t, s] : pairs) {
        const Vec shifted = F(t + tau, s + tau);
        const Vec base = F(t, s);
        best = std::max(best, space.distance(shifted, base));
    }
    return best;
}

TimeSignal compose(const TimeDependentMap& f, const TimeSignal& u,
                   const TimeSignal* lip_modulus) {
    if (f.in_dim != u.dim())
        throw ValidationError("compose: dimension mismatch between u and the x-argument of f");
    StateSpace out_space = (f.out_dim == u.dim() && u.space().dim() == f.out_dim)
                               ? u.space()
                               : StateSpace::sup(f.out_dim);
    TimeSignal composed(out_space, [f, u](double t) { return f.map(t, u(t)); });
    // Composition theorem bookkeeping: a tagged f applied to a signal with
    // class metadata (and a declared Lipschitz modulus) lands in SpMuPAA.
    if (f.claimed_class.has_value() && u.decomposition() &&
        (lip_modulus == nullptr || lip_modulus->valid()))
        return composed.tagged(SignalClass::SpMuPAA);
    return composed;
}

double measure_translation_diagnostic(const WeightedMeasure& mu, double tau,
                                      std::span<const Interval> probes) {
    if (probes.empty()) throw ValidationError("measure_translation_diagnostic: no probes");
    double best = 0.0;
    for (const Interval& a : probes) {
        const double base = mu.mass(a.lo, a.hi);
        if (base <= 1e-12) {
            std::ostringstream os;
            os << "measure_translation_diagnostic: degenerate probe [" << a.lo << "," << a.hi
               << "] with mass " << base;
            throw HypothesisError(os.str());
        }
        best = std::max(best, mu.mass(a.lo + tau, a.hi + tau) / base);
    }
    return best;
}

std::vector<long> convergent_denominators(double ratio, long q_max) {
    std::vector<long> out;
    double x = std::fabs(ratio);
    // standard continued-fraction recurrence for denominators
    long den_prev = 0, den_cur = 1;
    for (int i = 0; i < 64; ++i) {
        const double a = std::floor(x);
        if (a > 4e18) break;
        const long ai = static_cast<long>(a);
        const long den_next = (i == 0) ? 1 : ai * den_cur + den_prev;
        if (i > 0) {
            den_prev = den_cur;
            den_cur = den_next;
        }
        if (den_cur > q_max) break;
        if (den_cur > 0 && (out.empty() || out.back() != den_cur)) out.push_back(den_cur);
        const double frac = x - a;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    return out;
}

namespace {
double dist_to_integers(double x) {
    return std::fabs(x - std::round(x));
}
}  // namespace

double find_near_period(std::span<const double> ratios, long q_max, double base,
                        long* q_out) {
    if (ratios.empty()) throw ValidationError("find_near_period: no ratios");
    if (q_max < 1) throw ValidationError("find_near_period: q_max must be >= 1");
    std::set<long> candidates;
    for (double r : ratios)
        for (long q : convergent_denominators(r, q_max)) candidates.insert(q);
    for (long q = 1; q <= std::min<long>(q_max, 4096); ++q) candidates.insert(q);
    long best_q = 1;
    double best_score = std::numeric_limits<double>::infinity();
    for (long q : candidates) {
        double score = 0.0;
        for (double r : ratios) score = std::max(score, dist_to_integers(q * r));
        if (score < best_score) {
            best_score = score;
            best_q = q;
        }
    }
    if (q_out) *q_out = best_q;
    return base * static_cast<double>(best_q);
}

}  // namespace evo
