#include "evo/heat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "evo/errors.hpp"
#include "evo/quadrature.hpp"

namespace evo {

SpatialGrid::SpatialGrid(double L, int n_points) : L_(L), n_(n_points) {
    if (!(L > 0.0)) throw ValidationError("SpatialGrid: L must be > 0");
    if (n_points < 3) throw ValidationError("SpatialGrid: need at least 3 points");
    h_ = 2.0 * L / (n_ - 1);
    weights_.assign(n_, h_);
    weights_.front() = weights_.back() = 0.5 * h_;
    space_ = StateSpace::weighted_l2(weights_);
}

double SpatialGrid::integrate(const Vec& phi) const {
    if (static_cast<int>(phi.size()) != n_)
        throw ValidationError("SpatialGrid::integrate: size mismatch");
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += weights_[i] * phi[i];
    return s;
}

Vec heat_semigroup_apply(const SpatialGrid& grid, double tau, const Vec& phi,
                         SemigroupApplyInfo* info) {
    if (tau < 0.0) throw ValidationError("heat_semigroup_apply: tau must be >= 0");
    if (static_cast<int>(phi.size()) != grid.n())
        throw ValidationError("heat_semigroup_apply: size mismatch");
    if (info) {
        info->domain_too_small = std::sqrt(2.0 * tau) > 0.5 * grid.L();
        info->mass_in = grid.integrate(phi);
        info->mass_out = info->mass_in;
    }
    if (tau == 0.0) return phi;

    const int n = grid.n();
    const double h = grid.h();
    const double sigma2 = 2.0 * tau;
    const double sigma = std::sqrt(sigma2);
    const int radius = static_cast<int>(std::ceil(8.0 * sigma / h));

    // sampled Gaussian kernel times the quadrature step
    std::vector<double> ker(radius + 1);
    const double norm = h / std::sqrt(2.0 * std::numbers::pi * sigma2);
    for (int d = 0; d <= radius; ++d)
        ker[d] = norm * std::exp(-(d * h) * (d * h) / (2.0 * sigma2));
    if (sigma < 2.0 * h) {
        // under-resolved kernel: renormalize to unit discrete mass
        double sum = ker[0];
        for (int d = 1; d <= radius; ++d) sum += 2.0 * ker[d];
        for (double& k : ker) k /= sum;
    }

    // pre-scale by trapezoid end weights so the loop is a plain convolution
    Vec phw = phi;
    phw.front() *= 0.5;
    phw.back() *= 0.5;

    Vec out(n, 0.0);
    const int reach = std::min(radius, n - 1);
    for (int i = 0; i < n; ++i) {
        const int jlo = std::max(0, i - reach);
        const int jhi = std::min(n - 1, i + reach);
        double acc = 0.0;
        for (int j = jlo; j <= jhi; ++j) acc += ker[std::abs(i - j)] * phw[j];
        out[i] = acc;
    }
    if (info) info->mass_out = grid.integrate(out);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

class HeatFamily final : public DichotomyFamily {
public:
    HeatFamily(SpatialGrid grid, HeatCoefficients coeffs)
        : grid_(std::move(grid)),
          coeffs_(std::move(coeffs)),
          int_delta_([this](double t) { return coeffs_.delta_sig.value1(t); }, 1e-12),
          int_alpha_([this](double t) { return coeffs_.alpha_sig.value1(t); }, 1e-12) {}

    int dim() const override { return grid_.n(); }
    const StateSpace& space() const override { return grid_.space(); }
    DichotomyConstants constants() const override { return {1.0, coeffs_.omega}; }
    bool has_unstable_part() const override { return false; }

    Vec apply(double t, double s, const Vec& phi) const override {
        require_order(t, s, true);
        const double tau = std::max(0.0, int_delta_.between(s, t));
        const double a = int_alpha_.between(s, t);
        Vec out = heat_semigroup_apply(grid_, tau, phi);
        const double factor = std::exp(a);
        for (double& c : out) c *= factor;
        return out;
    }

    Vec project_stable(double, const Vec& phi) const override { return phi; }

    Vec apply_inverse_unstable(double t, double s, const Vec&) const override {
        require_order(t, s, false);
        return Vec(static_cast<std::size_t>(grid_.n()), 0.0);
    }

    const SpatialGrid& grid() const { return grid_; }

private:
    SpatialGrid grid_;
    HeatCoefficients coeffs_;
    quad::CachedIntegral int_delta_;
    quad::CachedIntegral int_alpha_;
};

}  // namespace

std::shared_ptr<const DichotomyFamily> build_heat_family(const SpatialGrid& grid,
                                                         const HeatCoefficients& coeffs,
                                                         Interval probe_range,
                                                         double probe_step) {
    if (coeffs.delta_sig.dim() != 1 || coeffs.alpha_sig.dim() != 1)
        throw ValidationError("build_heat_family: coefficients must be scalar signals");
    if (!(coeffs.delta_floor > 0.0))
        throw ValidationError("build_heat_family: delta_floor must be > 0");
    if (!(coeffs.omega > 0.0)) throw ValidationError("build_heat_family: omega must be > 0");
    for (double t = probe_range.lo; t <= probe_range.hi; t += probe_step) {
        const double d = coeffs.delta_sig.value1(t);
        if (d < coeffs.delta_floor - 1e-12) {
            std::ostringstream os;
            os << "build_heat_family: delta(" << t << ") = " << d << " below floor "
               << coeffs.delta_floor;
            throw HypothesisError(os.str());
        }
        const double a = coeffs.alpha_sig.value1(t);
        if (a > -coeffs.omega + 1e-12) {
            std::ostringstream os;
            os << "build_heat_family: alpha(" << t << ") = " << a << " exceeds -omega = "
               << -coeffs.omega;
            throw HypothesisError(os.str());
        }
    }
    return std::make_shared<HeatFamily>(grid, coeffs);
}

double bi_aa_family_defect(const DichotomyFamily& family, double tau,
                           std::span<const std::tuple<double, double, Vec>> samples) {
    if (samples.empty()) throw ValidationError("bi_aa_family_defect: no samples");
    const StateSpace& space = family.space();
    double worst = 0.0;
    for (const auto& [t, s, phi] : samples) {
        if (t < s) throw ValidationError("bi_aa_family_defect: sample needs t >= s");
        const Vec shifted = family.apply(t + tau, s + tau, phi);
        const Vec base = family.apply(t, s, phi);
        worst = std::max(worst, space.distance(shifted, base) / (1.0 + space.norm(phi)));
    }
    return worst;
}

double Sec4Nonlinearity::a0(double t) const {
    return a_sig.value1(t) + std::atan(t) - 0.5 * std::numbers::pi;
}

TimeSignal Sec4Nonlinearity::lip_modulus() const {
    const TimeSignal a = a_sig;
    const double lg = L_g;
    return TimeSignal::scalar([a, lg](double t) {
        return lg * std::fabs(a.value1(t) + std::atan(t) - 0.5 * std::numbers::pi);
    });
}

SemilinearProblem build_sec4_problem(const SpatialGrid& grid,
                                     const HeatCoefficients& coeffs,
                                     const Sec4Nonlinearity& nl,
                                     const WeightedMeasure& measure,
                                     StepanovParams params, double lip_norm_override,
                                     double forcing_sup_bound, Interval lip_probe_range) {
    if (nl.a_sig.dim() != 1)
        throw ValidationError("build_sec4_problem: a(t) must be scalar");
    if (nl.L_g < 0.0) throw ValidationError("build_sec4_problem: L_g must be >= 0");
    if (!nl.g_map) throw ValidationError("build_sec4_problem: missing g");

    SemilinearProblem prob;
    prob.green = GreenFunction(build_heat_family(grid, coeffs));
    const Sec4Nonlinearity nl_copy = nl;
    prob.f.in_dim = prob.f.out_dim = grid.n();
    prob.f.map = [nl_copy](double t, const Vec& phi) {
        Vec out = nl_copy.g_map(phi);
        const double a0 = nl_copy.a0(t);
        for (double& c : out) c *= a0;
        return out;
    };
    // a in AAS^1 plus the ergodic arctan drift puts f in the uniform
    // Stepanov mu-pseudo almost automorphic class (composition theorem).
    prob.f.claimed_class = SignalClass::SpMuPAA;
    prob.lip_modulus = nl.lip_modulus();
    prob.stepanov = params;
    prob.lip_norm = lip_norm_override > 0.0
                        ? lip_norm_override
                        : 1.1 * stepanov_norm(prob.lip_modulus, params, lip_probe_range, 0.25);
    prob.forcing_sup_bound = forcing_sup_bound;
    prob.measure_satisfies_M = measure.satisfies_M();

    validate_lipschitz(prob, {-20.0, 20.0}, 2.0, 16, 20240u);
    return prob;
}

}  // namespace evo
