#include "evo/dichotomy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "evo/errors.hpp"
#include "evo/quadrature.hpp"

namespace evo {

void validate_constants(const DichotomyConstants& c) {
    if (!(c.M >= 1.0)) throw ValidationError("DichotomyConstants: M must be >= 1");
    if (!(c.delta > 0.0)) throw ValidationError("DichotomyConstants: delta must be > 0");
}

Vec DichotomyFamily::project_unstable(double t, const Vec& x) const {
    return vec_diff(x, project_stable(t, x));
}

void DichotomyFamily::require_order(double t, double s, bool forward) const {
    if (forward ? (t < s) : (t > s)) {
        std::ostringstream os;
        os << "DichotomyFamily: time order violated (t=" << t << ", s=" << s
           << (forward ? ", need t >= s)" : ", need t <= s)");
        throw ValidationError(os.str());
    }
}

Vec GreenFunction::apply(double t, double s, const Vec& x) const {
    if (!family_) throw ValidationError("GreenFunction: empty family");
    // diagonal s == t belongs to the stable branch
    if (s <= t) return family_->apply(t, s, family_->project_stable(s, x));
    Vec v = family_->apply_inverse_unstable(t, s, family_->project_unstable(s, x));
    for (double& c : v) c = -c;
    return v;
}

// ---------------------------------------------------------------------------
// diagonal family

namespace {

class DiagonalFamily final : public DichotomyFamily {
public:
    explicit DiagonalFamily(std::vector<double> rates)
        : rates_(std::move(rates)), space_(StateSpace::sup(static_cast<int>(rates_.size()))) {
        double dmin = std::numeric_limits<double>::infinity();
        for (double r : rates_) {
            if (r == 0.0) throw HypothesisError("make_diagonal_family: zero rate, family is not hyperbolic");
            dmin = std::min(dmin, std::fabs(r));
            if (r > 0.0) any_unstable_ = true;
        }
        constants_ = {1.0, dmin};
    }

    int dim() const override { return static_cast<int>(rates_.size()); }
    const StateSpace& space() const override { return space_; }
    DichotomyConstants constants() const override { return constants_; }
    bool has_unstable_part() const override { return any_unstable_; }

    Vec apply(double t, double s, const Vec& x) const override {
        require_order(t, s, true);
        check_dim(x);
        Vec y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            y[i] = std::exp(rates_[i] * (t - s)) * x[i];
        return y;
    }

    Vec project_stable(double, const Vec& x) const override {
        check_dim(x);
        Vec y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = rates_[i] < 0.0 ? x[i] : 0.0;
        return y;
    }

    Vec apply_inverse_unstable(double t, double s, const Vec& x) const override {
        require_order(t, s, false);
        check_dim(x);
        Vec y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            y[i] = rates_[i] > 0.0 ? std::exp(rates_[i] * (t - s)) * x[i] : 0.0;
        return y;
    }

private:
    void check_dim(const Vec& x) const {
        if (static_cast<int>(x.size()) != dim())
            throw ValidationError("DiagonalFamily: vector dimension mismatch");
    }

    std::vector<double> rates_;
    StateSpace space_;
    DichotomyConstants constants_;
    bool any_unstable_ = false;
};

}  // namespace

std::shared_ptr<const DichotomyFamily> make_diagonal_family(std::vector<double> rates) {
    if (rates.empty()) throw ValidationError("make_diagonal_family: empty rate list");
    return std::make_shared<DiagonalFamily>(std::move(rates));
}

// ---------------------------------------------------------------------------
// scalar time-varying family

namespace {

class ScalarAlphaFamily final : public DichotomyFamily {
public:
    ScalarAlphaFamily(TimeSignal alpha, double omega)
        : alpha_(std::move(alpha)),
          omega_(omega),
          space_(StateSpace::sup(1)),
          integral_([this](double t) { return alpha_.value1(t); }, 1e-12) {}

    int dim() const override { return 1; }
    const StateSpace& space() const override { return space_; }
    DichotomyConstants constants() const override { return {1.0, omega_}; }
    bool has_unstable_part() const override { return false; }

    Vec apply(double t, double s, const Vec& x) const override {
        require_order(t, s, true);
        const double factor = std::exp(integral_.between(s, t));
        return Vec{factor * x.at(0)};
    }

    Vec project_stable(double, const Vec& x) const override { return x; }

    Vec apply_inverse_unstable(double t, double s, const Vec& x) const override {
        require_order(t, s, false);
        (void)x;
        return Vec{0.0};
    }

private:
    TimeSignal alpha_;
    double omega_;
    StateSpace space_;
    quad::CachedIntegral integral_;
};

}  // namespace

std::shared_ptr<const DichotomyFamily> make_scalar_timevarying_family(
    TimeSignal alpha, double omega, Interval probe_range, double probe_step) {
    if (alpha.dim() != 1)
        throw ValidationError("make_scalar_timevarying_family: alpha must be scalar");
    if (!(omega > 0.0))
        throw ValidationError("make_scalar_timevarying_family: omega must be > 0");
    for (double t = probe_range.lo; t <= probe_range.hi; t += probe_step) {
        const double a = alpha.value1(t);
        if (a > -omega + 1e-12) {
            std::ostringstream os;
            os << "make_scalar_timevarying_family: alpha(" << t << ") = " << a
               << " exceeds -omega = " << -omega;
            throw HypothesisError(os.str());
        }
    }
    return std::make_shared<ScalarAlphaFamily>(std::move(alpha), omega);
}

// ---------------------------------------------------------------------------
// time-varying matrix family (fixed-step RK4 propagation)

namespace {

class MatrixFamily final : public DichotomyFamily {
public:
    explicit MatrixFamily(MatrixFamilyConfig cfg)
        : cfg_(std::move(cfg)), space_(StateSpace::sup(cfg_.dim)) {
        validate_constants(cfg_.constants);
        for (std::uint8_t m : cfg_.stable_mask)
            if (m == 0) any_unstable_ = true;
    }

    int dim() const override { return cfg_.dim; }
    const StateSpace& space() const override { return space_; }
    DichotomyConstants constants() const override { return cfg_.constants; }
    bool has_unstable_part() const override { return any_unstable_; }

    Vec apply(double t, double s, const Vec& x) const override {
        require_order(t, s, true);
        return propagate(s, t, x);
    }

    Vec project_stable(double, const Vec& x) const override {
        check_dim(x);
        Vec y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = cfg_.stable_mask[i] ? x[i] : 0.0;
        return y;
    }

    Vec apply_inverse_unstable(double t, double s, const Vec& x) const override {
        require_order(t, s, false);
        check_dim(x);
        Vec q(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) q[i] = cfg_.stable_mask[i] ? 0.0 : x[i];
        // run the unstable branch backward from s to t; the splitting is
        // invariant, so q stays in the unstable range
        return propagate(s, t, q);
    }

private:
    void check_dim(const Vec& x) const {
        if (static_cast<int>(x.size()) != dim())
            throw ValidationError("MatrixFamily: vector dimension mismatch");
    }

    void matvec(double time, const Vec& v, Vec& out) const {
        const int n = cfg_.dim;
        thread_local std::vector<double> a;
        a.assign(static_cast<std::size_t>(n) * n, 0.0);
        cfg_.A_of_t(time, a);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += a[static_cast<std::size_t>(i) * n + j] * v[j];
            out[i] = acc;
        }
    }

    Vec propagate(double from, double to, const Vec& x0) const {
        check_dim(x0);
        if (from == to) return x0;
        const double span = to - from;
        const int steps = std::max(1, static_cast<int>(std::ceil(std::fabs(span) / cfg_.propagator_step)));
        const double h = span / steps;
        Vec y = x0, k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
        double time = from;
        for (int step = 0; step < steps; ++step) {
            matvec(time, y, k1);
            for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
            matvec(time + 0.5 * h, tmp, k2);
            for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
            matvec(time + 0.5 * h, tmp, k3);
            for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + h * k3[i];
            matvec(time + h, tmp, k4);
            for (std::size_t i = 0; i < y.size(); ++i)
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            time = from + (step + 1) * h;
        }
        return y;
    }

    MatrixFamilyConfig cfg_;
    StateSpace space_;
    bool any_unstable_ = false;
};

}  // namespace

std::shared_ptr<const DichotomyFamily> make_matrix_family(MatrixFamilyConfig cfg) {
    if (cfg.dim < 1) throw ValidationError("make_matrix_family: dim must be >= 1");
    if (!cfg.A_of_t) throw ValidationError("make_matrix_family: missing A(t)");
    if (static_cast<int>(cfg.stable_mask.size()) != cfg.dim)
        throw ValidationError("make_matrix_family: stable_mask size mismatch");
    if (!(cfg.propagator_step > 0.0))
        throw ValidationError("make_matrix_family: propagator_step must be > 0");
    return std::make_shared<MatrixFamily>(std::move(cfg));
}

AxiomCheckResult check_dichotomy_axioms(const DichotomyFamily& family, int trials,
                                        unsigned seed, double max_span,
                                        double amplitude) {
    if (trials < 1) throw ValidationError("check_dichotomy_axioms: trials must be >= 1");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> utime(-max_span, max_span);
    std::uniform_real_distribution<double> uspan(0.0, max_span);
    std::uniform_real_distribution<double> ux(-amplitude, amplitude);
    const StateSpace& space = family.space();
    const DichotomyConstants c = family.constants();
    const GreenFunction green(
        std::shared_ptr<const DichotomyFamily>(&family, [](const DichotomyFamily*) {}));

    AxiomCheckResult res;
    res.trials = trials;
    Vec x(static_cast<std::size_t>(family.dim()));
    for (int trial = 0; trial < trials; ++trial) {
        const double s = utime(rng);
        const double span = uspan(rng);
        const double t = s + span;
        const double r = s + span * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        for (double& e : x) e = ux(rng);
        const double nx = space.norm(x);

        res.identity = std::max(res.identity, space.distance(family.apply(t, t, x), x));
        res.cocycle = std::max(
            res.cocycle,
            space.distance(family.apply(t, r, family.apply(r, s, x)), family.apply(t, s, x)));
        res.commutation = std::max(
            res.commutation,
            space.distance(family.apply(t, s, family.project_stable(s, x)),
                           family.project_stable(t, family.apply(t, s, x))));
        res.idempotence = std::max(
            res.idempotence,
            space.distance(family.project_stable(t, family.project_stable(t, x)),
                           family.project_stable(t, x)));

        const double fwd = space.norm(family.apply(t, s, family.project_stable(s, x)));
        res.decay_excess =
            std::max(res.decay_excess, fwd - c.M * std::exp(-c.delta * span) * nx);
        // backward branch runs from t down to s, acting on Q(t)x
        const double bwd =
            space.norm(family.apply_inverse_unstable(s, t, family.project_unstable(t, x)));
        res.decay_excess =
            std::max(res.decay_excess, bwd - c.M * std::exp(-c.delta * span) * nx);
        // inverse identity on the unstable range at time s
        const Vec q = family.project_unstable(s, x);
        res.inverse = std::max(
            res.inverse,
            space.distance(family.apply_inverse_unstable(s, t, family.apply(t, s, q)), q));

        for (const auto& [ta, tb] : {std::pair{t, s}, std::pair{s, t}}) {
            const double g = space.norm(green.apply(ta, tb, x));
            res.green_excess = std::max(
                res.green_excess, g - c.M * std::exp(-c.delta * std::fabs(ta - tb)) * nx);
        }
    }
    return res;
}

}  // namespace evo
