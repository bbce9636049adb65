#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "evo/signal.hpp"
#include "evo/state.hpp"

namespace evo {

/// Dichotomy constants: |U(t,s)P(s)| <= M e^{-delta (t-s)} and the backward
/// analogue on the unstable branch. Always supplied analytically for catalog
/// families (they feed truncation certificates and must be safe bounds).
struct DichotomyConstants {
    double M = 1.0;
    double delta = 1.0;
};

void validate_constants(const DichotomyConstants& c);

/// Evolution family U(t,s) with an exponential dichotomy: projections P(t),
/// inverse branch on the unstable range, constants (M, delta).
class DichotomyFamily {
public:
    virtual ~DichotomyFamily() = default;

    virtual int dim() const = 0;
    virtual const StateSpace& space() const = 0;
    virtual DichotomyConstants constants() const = 0;

    /// U(t,s)x for t >= s.
    virtual Vec apply(double t, double s, const Vec& x) const = 0;
    /// P(t)x.
    virtual Vec project_stable(double t, const Vec& x) const = 0;
    /// U~(t,s)Q(s)x for t <= s (backward branch; decays in s - t).
    virtual Vec apply_inverse_unstable(double t, double s, const Vec& x) const = 0;

    /// Q(t)x = x - P(t)x.
    Vec project_unstable(double t, const Vec& x) const;
    /// False when Q = 0 identically (exponentially stable case); lets the
    /// solver skip the unstable window integrals.
    virtual bool has_unstable_part() const { return true; }

protected:
    void require_order(double t, double s, bool forward) const;
};

/// Green's function of a hyperbolic family with the solution-formula sign
/// convention:
///
///   Gamma(t,s)x =  U(t,s)P(s)x          for s <= t,
///   Gamma(t,s)x = -U~(t,s)Q(s)x         for s >  t.
///
/// The minus sign on the unstable branch is baked in so that
/// u(t) = int Gamma(t,s) g(s) ds is literally the bounded mild solution (the
/// solution formula subtracts the unstable integral).
class GreenFunction {
public:
    GreenFunction() = default;
    explicit GreenFunction(std::shared_ptr<const DichotomyFamily> family)
        : family_(std::move(family)) {}

    Vec apply(double t, double s, const Vec& x) const;
    const DichotomyFamily& family() const { return *family_; }
    const std::shared_ptr<const DichotomyFamily>& family_ptr() const { return family_; }
    bool valid() const { return static_cast<bool>(family_); }

private:
    std::shared_ptr<const DichotomyFamily> family_;
};

/// U(t,s) = diag(e^{rate_i (t-s)}); P projects onto the coordinates with
/// negative rate. M = 1, delta = min |rate_i|. Rates must be nonzero.
std::shared_ptr<const DichotomyFamily> make_diagonal_family(std::vector<double> rates);

/// Scalar family U(t,s) = e^{int_s^t alpha}, P = I, requires alpha(t) <= -omega
/// on the probe grid. M = 1, delta = omega.
std::shared_ptr<const DichotomyFamily> make_scalar_timevarying_family(
    TimeSignal alpha, double omega, Interval probe_range = {-50.0, 50.0},
    double probe_step = 0.05);

struct MatrixFamilyConfig {
    int dim = 0;
    /// Fills a row-major dim x dim matrix A(t). A(t) must preserve the
    /// declared coordinate splitting (block structure constant in time).
    std::function<void(double, std::vector<double>&)> A_of_t;
    /// stable_mask[i] != 0 marks coordinate i as stable.
    std::vector<std::uint8_t> stable_mask;
    /// Fixed step of the fourth-order propagator.
    double propagator_step = 0.002;
    /// Analytic dichotomy constants (never estimated).
    DichotomyConstants constants;
};

/// Time-varying matrix family propagated by fixed-step RK4.
std::shared_ptr<const DichotomyFamily> make_matrix_family(MatrixFamilyConfig cfg);

/// Worst-case defects of the dichotomy axioms over randomized trials
/// (times in [-max_span, max_span] with |t - s| <= max_span, state entries
/// in [-amplitude, amplitude]). decay_excess and green_excess are the amounts
/// by which the exponential bounds were exceeded (0 when they hold).
struct AxiomCheckResult {
    double cocycle = 0.0;
    double identity = 0.0;
    double commutation = 0.0;
    double idempotence = 0.0;
    double inverse = 0.0;
    double decay_excess = 0.0;
    double green_excess = 0.0;
    int trials = 0;
};

AxiomCheckResult check_dichotomy_axioms(const DichotomyFamily& family, int trials,
                                        unsigned seed, double max_span = 10.0,
                                        double amplitude = 1.0);

}  // namespace evo
