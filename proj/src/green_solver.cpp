#include "evo/green_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evo/errors.hpp"

namespace evo {

namespace {

constexpr int kMaxWindows = 100000;

// Composite Simpson of a vector integrand over [a, b], fixed left-to-right
// summation.
template <class Integrand>
void accumulate_simpson(Integrand&& f, double a, double b, int nodes, Vec& acc) {
    int m = nodes < 2 ? 2 : nodes;
    if (m % 2) ++m;
    const double h = (b - a) / m;
    for (int i = 0; i <= m; ++i) {
        const double s = (i == m) ? b : a + i * h;
        const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        vec_axpy(acc, w * h / 3.0, f(s));
    }
}

}  // namespace

LinearProblem linear_problem_with_probed_norm(GreenFunction green, TimeSignal forcing,
                                              StepanovParams stepanov,
                                              Interval probe_range, double probe_step) {
    const double probed = stepanov_norm(forcing, stepanov, probe_range, probe_step);
    LinearProblem prob;
    prob.green = std::move(green);
    prob.forcing = std::move(forcing);
    prob.stepanov = stepanov;
    prob.g_norm = probed * 1.1;
    return prob;
}

Vec window_term(const LinearProblem& prob, int k, double t, int nodes) {
    if (k < 1) throw ValidationError("window_term: k must be >= 1");
    const DichotomyFamily& fam = prob.green.family();
    Vec acc(static_cast<std::size_t>(fam.dim()), 0.0);
    // each window is integrated against its own Green branch: the k = 1
    // boundary is pinned to exactly t so floating-point drift in t - k + 1
    // cannot push a node across the branch diagonal, and the unstable
    // integrand takes its one-sided limit -Q(t)g(t) at s = t
    accumulate_simpson(
        [&](double s) { return fam.apply(t, std::min(s, t), fam.project_stable(s, prob.forcing(s))); },
        t - k, k == 1 ? t : t - k + 1.0, nodes, acc);
    if (fam.has_unstable_part()) {
        accumulate_simpson(
            [&](double s) {
                Vec v = fam.apply_inverse_unstable(t, std::max(s, t),
                                                   fam.project_unstable(s, prob.forcing(s)));
                for (double& c : v) c = -c;
                return v;
            },
            k == 1 ? t : t + k - 1.0, t + k, nodes, acc);
    }
    return acc;
}

double window_term_bound(const DichotomyConstants& c, const StepanovParams& params,
                         double g_norm, int k) {
    if (k < 1) throw ValidationError("window_term_bound: k must be >= 1");
    if (g_norm == 0.0) return 0.0;
    validate_constants(c);
    const double d = c.delta;
    double factor;
    if (params.q_infinite()) {
        factor = std::exp(d);  // gives 2 M |g| e^{-delta (k-1)}
    } else {
        const double q = params.q();
        factor = std::pow((std::exp(d * q) - 1.0) / (d * q), 1.0 / q);
    }
    return 2.0 * c.M * g_norm * factor * std::exp(-d * k);
}

double series_tail_bound(const DichotomyConstants& c, const StepanovParams& params,
                         double g_norm, int n) {
    if (n < 0) throw ValidationError("series_tail_bound: n must be >= 0");
    // geometric sum of the per-window bounds over k >= n+1
    return window_term_bound(c, params, g_norm, n + 1) / (1.0 - std::exp(-c.delta));
}

int windows_for_tolerance(const DichotomyConstants& c, const StepanovParams& params,
                          double g_norm, double tol, int n_min) {
    if (!(tol > 0.0)) throw ValidationError("windows_for_tolerance: tol must be > 0");
    int n = std::max(n_min, 1);
    const double head = series_tail_bound(c, params, g_norm, 0);
    if (head > tol) {
        // closed-form first guess, then verify
        const double guess = std::log(head / tol) / c.delta;
        n = std::max(n, static_cast<int>(std::ceil(guess)));
    }
    while (n <= kMaxWindows && series_tail_bound(c, params, g_norm, n) > tol) ++n;
    if (n > kMaxWindows) {
        std::ostringstream os;
        const double achieved = series_tail_bound(c, params, g_norm, kMaxWindows);
        os << "windows_for_tolerance: cannot reach tolerance " << tol << " within "
           << kMaxWindows << " windows (achieved " << achieved << ")";
        throw ConvergenceError(os.str(), achieved);
    }
    return n;
}

LinearSolveResult solve_linear(const LinearProblem& prob, const SeriesControl& ctrl,
                               double t) {
    if (ctrl.n_windows < 1) throw ValidationError("solve_linear: n_windows must be >= 1");
    const DichotomyConstants c = prob.green.family().constants();
    int n = ctrl.n_windows;
    if (ctrl.tolerance > 0.0)
        n = windows_for_tolerance(c, prob.stepanov, prob.g_norm, ctrl.tolerance, n);
    LinearSolveResult res;
    res.value.assign(static_cast<std::size_t>(prob.green.family().dim()), 0.0);
    for (int k = 1; k <= n; ++k) {
        const Vec term = window_term(prob, k, t, ctrl.nodes_per_window);
        vec_axpy(res.value, 1.0, term);
    }
    res.tail_bound = series_tail_bound(c, prob.stepanov, prob.g_norm, n);
    res.n_windows = n;
    return res;
}

double verify_mild_solution(const LinearProblem& prob, const TimeSignal& u, double t,
                            double s, int nodes) {
    if (t < s) throw ValidationError("verify_mild_solution: needs t >= s");
    const DichotomyFamily& fam = prob.green.family();
    Vec expect = fam.apply(t, s, u(s));
    int m = nodes < 2 ? 2 : nodes;
    if (m % 2) ++m;
    const double h = (t - s) / m;
    if (t > s) {
        for (int i = 0; i <= m; ++i) {
            const double r = (i == m) ? t : s + i * h;
            const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            vec_axpy(expect, w * h / 3.0, fam.apply(t, r, prob.forcing(r)));
        }
    }
    return fam.space().distance(u(t), expect);
}

}  // namespace evo
