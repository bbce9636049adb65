#pragma once

#include <cmath>
#include <functional>
#include <mutex>
#include <unordered_map>

#include "evo/errors.hpp"

namespace evo::quad {

/// Composite Simpson rule with `subintervals` panels (rounded up to an even
/// count, minimum 2). Summation order is fixed left-to-right.
template <class F>
double simpson(F&& f, double a, double b, int subintervals) {
    if (b == a) return 0.0;
    int m = subintervals < 2 ? 2 : subintervals;
    if (m % 2) ++m;
    const double h = (b - a) / m;
    double s = f(a);
    for (int i = 1; i < m; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    s += f(b);
    return s * h / 3.0;
}

namespace detail {
template <class F>
double adaptive_step(F&& f, double a, double b, double fa, double fm, double fb,
                     double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson with absolute tolerance. Handles b < a by sign flip.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol = 1e-12,
                        int max_depth = 40) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return sign * detail::adaptive_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

/// Antiderivative cache for repeated interval integrals of a fixed scalar
/// function. Prefix values are anchored at the integers (spacing 1.0); each
/// unit integral is an independent adaptive Simpson result, so cached values
/// do not depend on request order. Safe for concurrent readers.
class CachedIntegral {
public:
    explicit CachedIntegral(std::function<double(double)> f, double unit_tol = 1e-12)
        : f_(std::move(f)), tol_(unit_tol) {}

    /// Integral of f over [s, t] (signed).
    double between(double s, double t) const {
        if (s == t) return 0.0;
        return value_at(t) - value_at(s);
    }

private:
    double value_at(double x) const {
        const double kf = std::floor(x);
        const long k = static_cast<long>(kf);
        return prefix(k) + adaptive_simpson(f_, kf, x, tol_);
    }

    double prefix(long k) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = prefix_.find(k);
        if (it != prefix_.end()) return it->second;
        if (prefix_.empty()) prefix_[0] = 0.0;
        // extend the chain from the nearest built anchor toward k, always
        // in index order so the stored values are order-independent
        long lo = 0, hi = 0;
        for (const auto& kv : prefix_) {
            lo = std::min(lo, kv.first);
            hi = std::max(hi, kv.first);
        }
        while (hi < k) {
            prefix_[hi + 1] = prefix_[hi] + unit(hi);
            ++hi;
        }
        while (lo > k) {
            prefix_[lo - 1] = prefix_[lo] - unit(lo - 1);
            --lo;
        }
        return prefix_[k];
    }

    double unit(long k) const {
        return adaptive_simpson(f_, static_cast<double>(k), static_cast<double>(k + 1), tol_);
    }

    std::function<double(double)> f_;
    double tol_;
    mutable std::mutex mu_;
    mutable std::unordered_map<long, double> prefix_;
};

}  // namespace evo::quad
