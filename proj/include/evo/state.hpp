#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "evo/errors.hpp"

namespace evo {

using Vec = std::vector<double>;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

enum class NormKind { Sup, WeightedL2 };

/// Finite-dimensional state space with its norm. ODE demos use the sup norm,
/// PDE grids use a weighted discrete L2 norm (trapezoid weights).
class StateSpace {
public:
    StateSpace() : dim_(1), kind_(NormKind::Sup) {}

    static StateSpace sup(int dim) {
        if (dim < 1) throw ValidationError("StateSpace: dim must be >= 1");
        StateSpace s;
        s.dim_ = dim;
        s.kind_ = NormKind::Sup;
        return s;
    }

    static StateSpace weighted_l2(std::vector<double> weights) {
        if (weights.empty()) throw ValidationError("StateSpace: empty weight vector");
        for (double w : weights)
            if (!(w > 0.0)) throw ValidationError("StateSpace: weights must be positive");
        StateSpace s;
        s.dim_ = static_cast<int>(weights.size());
        s.kind_ = NormKind::WeightedL2;
        s.weights_ = std::move(weights);
        return s;
    }

    int dim() const { return dim_; }
    NormKind kind() const { return kind_; }
    const std::vector<double>& weights() const { return weights_; }

    double norm(const Vec& v) const {
        if (static_cast<int>(v.size()) != dim_)
            throw ValidationError("StateSpace::norm: dimension mismatch");
        if (kind_ == NormKind::Sup) {
            double m = 0.0;
            for (double c : v) m = std::max(m, std::fabs(c));
            return m;
        }
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) s += weights_[i] * v[i] * v[i];
        return std::sqrt(s);
    }

    double distance(const Vec& a, const Vec& b) const {
        if (a.size() != b.size())
            throw ValidationError("StateSpace::distance: dimension mismatch");
        Vec d(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
        return norm(d);
    }

private:
    int dim_;
    NormKind kind_;
    std::vector<double> weights_;
};

// Small dense-vector helpers used throughout the solvers.
inline void vec_axpy(Vec& y, double a, const Vec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

inline Vec vec_scaled(const Vec& x, double a) {
    Vec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i];
    return y;
}

inline Vec vec_sum(const Vec& a, const Vec& b) {
    Vec y(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) y[i] = a[i] + b[i];
    return y;
}

inline Vec vec_diff(const Vec& a, const Vec& b) {
    Vec y(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) y[i] = a[i] - b[i];
    return y;
}

}  // namespace evo
