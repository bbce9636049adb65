#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evo/state.hpp"

namespace evo {

/// Function classes tracked as metadata. Membership is never decided
/// numerically; tags record what the calling code claims (backed by the
/// composition theorems) and propagate through compose / picard_iterate.
enum class SignalClass { AP, AA, SpAA, MuErgodic, MuPAA, SpMuPAA };

const char* signal_class_name(SignalClass c);

class TimeSignal;

/// Claimed decomposition f = aa_part + ergodic_part. Parts may be absent when
/// only the class tag is known (e.g. for composed signals).
struct ClassDecomposition {
    std::shared_ptr<const TimeSignal> aa_part;
    std::shared_ptr<const TimeSignal> ergodic_part;
    SignalClass claimed_class = SignalClass::MuPAA;
};

/// An evaluatable map t -> state vector. Evaluation must be total on finite
/// intervals and deterministic; non-finite outputs raise EvaluationError.
class TimeSignal {
public:
    TimeSignal() = default;
    TimeSignal(StateSpace space, std::function<Vec(double)> eval)
        : space_(std::move(space)), eval_(std::move(eval)) {}

    /// Constant vector signal (sup norm space).
    static TimeSignal constant(Vec value);
    /// Scalar signal from a plain function; dim 1, sup norm.
    static TimeSignal scalar(std::function<double(double)> f);

    Vec operator()(double t) const;
    /// Scalar convenience accessor; requires dim() == 1.
    double value1(double t) const;

    int dim() const { return space_.dim(); }
    const StateSpace& space() const { return space_; }
    bool valid() const { return static_cast<bool>(eval_); }

    const std::shared_ptr<const ClassDecomposition>& decomposition() const { return meta_; }
    std::optional<SignalClass> claimed_class() const {
        if (meta_) return meta_->claimed_class;
        return std::nullopt;
    }

    /// Copy of this signal carrying only a class tag.
    TimeSignal tagged(SignalClass cls) const;

    /// Copy carrying a full decomposition. When validate is true the identity
    /// parent = aa + ergodic is checked on a 1000-point sample of
    /// [-50, 50] to 1e-12 (in this signal's norm).
    TimeSignal with_decomposition(std::shared_ptr<const TimeSignal> aa,
                                  std::shared_ptr<const TimeSignal> ergodic,
                                  SignalClass cls, bool validate = true) const;

private:
    StateSpace space_;
    std::function<Vec(double)> eval_;
    std::shared_ptr<const ClassDecomposition> meta_;
};

/// Time-dependent map (t, x) -> y used for nonlinearities and compositions.
struct TimeDependentMap {
    int in_dim = 1;
    int out_dim = 1;
    std::function<Vec(double, const Vec&)> map;
    std::optional<SignalClass> claimed_class;

    Vec operator()(double t, const Vec& x) const { return map(t, x); }
};

// Pointwise combinators. Dimensions must agree.
TimeSignal signal_sum(const TimeSignal& a, const TimeSignal& b);
TimeSignal signal_product(const TimeSignal& a, const TimeSignal& b);
TimeSignal signal_scale(double c, const TimeSignal& a);

/// Signal backed by values on a uniform time grid. Inside the grid, values
/// are produced by 4-point (cubic Lagrange) interpolation; outside, the
/// boundary value extends constantly. Grid needs at least 2 points; with
/// fewer than 4 the interpolation degrades to linear.
TimeSignal grid_signal(double t0, double dt, std::vector<Vec> values, StateSpace space);

}  // namespace evo
