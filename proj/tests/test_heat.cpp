#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "evo/heat.hpp"

using namespace evo;

namespace {

Vec gaussian_density(const SpatialGrid& grid, double sigma2, double center = 0.0) {
    Vec phi(static_cast<std::size_t>(grid.n()));
    for (int i = 0; i < grid.n(); ++i) {
        const double z = grid.x(i) - center;
        phi[i] = std::exp(-z * z / (2.0 * sigma2)) / std::sqrt(2.0 * std::numbers::pi * sigma2);
    }
    return phi;
}

HeatCoefficients periodic_coeffs() {
    HeatCoefficients c;
    c.delta_sig = TimeSignal::scalar([](double t) { return 2.5 + std::sin(t); });
    c.alpha_sig = TimeSignal::scalar([](double t) { return -2.0 + 0.5 * std::cos(t); });
    c.delta_floor = 1.0;
    c.omega = 1.5;
    return c;
}

HeatCoefficients quasiperiodic_coeffs() {
    HeatCoefficients c;
    c.delta_sig = TimeSignal::scalar([](double t) {
        return 2.5 + std::sin(t) + 0.4 * std::sin(std::numbers::sqrt2 * t);
    });
    c.alpha_sig = TimeSignal::scalar([](double t) {
        return -2.0 + 0.3 * std::sin(std::numbers::sqrt2 * t);
    });
    c.delta_floor = 1.0;
    c.omega = 1.6;
    return c;
}

Vec random_bumps(const SpatialGrid& grid, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec phi(static_cast<std::size_t>(grid.n()), 0.0);
    for (int b = 0; b < 3; ++b) {
        const double c = 5.0 * u(rng);
        const double w = 0.5 + 0.75 * (u(rng) + 1.0);
        const double a = u(rng);
        for (int i = 0; i < grid.n(); ++i) {
            const double z = (grid.x(i) - c) / w;
            phi[i] += a * std::exp(-0.5 * z * z);
        }
    }
    return phi;
}

}  // namespace

TEST_CASE("grid weights give the right norm of the constant") {
    SpatialGrid grid(20.0, 2001);
    Vec ones(2001, 1.0);
    CHECK(std::fabs(grid.space().norm(ones) - std::sqrt(40.0)) < 1e-10);
    CHECK(grid.h() == doctest::Approx(0.02));
}

TEST_CASE("semigroup identity at tau = 0 and unit-mass kernels") {
    SpatialGrid grid(20.0, 2001);
    Vec phi = gaussian_density(grid, 0.25);
    CHECK(heat_semigroup_apply(grid, 0.0, phi) == phi);

    // flat input stays flat away from the boundary
    Vec ones(2001, 1.0);
    Vec out = heat_semigroup_apply(grid, 0.1, ones);
    for (int i = 0; i < grid.n(); ++i)
        if (std::fabs(grid.x(i)) < 15.0)
            CHECK(std::fabs(out[i] - 1.0) < 1e-6);
}

TEST_CASE("Gaussian in, Gaussian out: variances add") {
    SpatialGrid grid(20.0, 2001);
    const double s2 = 0.25, tau = 0.25;  // sigma = 0.5
    Vec phi = gaussian_density(grid, s2);
    SemigroupApplyInfo info;
    Vec out = heat_semigroup_apply(grid, tau, phi, &info);
    Vec expect = gaussian_density(grid, s2 + 2.0 * tau);
    double sup = 0.0;
    for (int i = 0; i < grid.n(); ++i) sup = std::max(sup, std::fabs(out[i] - expect[i]));
    CHECK(sup <= 1e-4);
    CHECK(!info.domain_too_small);
    CHECK(info.mass_out == doctest::Approx(info.mass_in).epsilon(1e-10));
}

TEST_CASE("narrow kernels stay contractive; wide kernels warn") {
    SpatialGrid grid(20.0, 201);  // h = 0.2
    Vec phi = gaussian_density(grid, 1.0);
    const double n0 = grid.space().norm(phi);
    for (double tau : {1e-16, 1e-8, 1e-4, 0.005, 0.02}) {
        Vec out = heat_semigroup_apply(grid, tau, phi);
        CHECK(grid.space().norm(out) <= n0 * (1.0 + 1e-9));
    }
    SemigroupApplyInfo info;
    heat_semigroup_apply(grid, 51.0, phi, &info);  // sqrt(102) > L/2
    CHECK(info.domain_too_small);
}

TEST_CASE("semigroup law on the grid") {
    SpatialGrid grid(20.0, 2001);
    Vec phi = gaussian_density(grid, 1.0);
    const std::pair<double, double> cases[] = {{0.3, 0.7}, {0.1, 0.1}, {1.0, 0.5}};
    for (const auto& [t1, t2] : cases) {
        Vec two = heat_semigroup_apply(grid, t2, heat_semigroup_apply(grid, t1, phi));
        Vec one = heat_semigroup_apply(grid, t1 + t2, phi);
        CHECK(grid.space().distance(two, one) <= 1e-6);
    }
}

TEST_CASE("heat family: constant coefficients match the closed form") {
    SpatialGrid grid(20.0, 1001);
    HeatCoefficients c;
    c.delta_sig = TimeSignal::constant({1.0});
    c.alpha_sig = TimeSignal::constant({-1.0});
    c.delta_floor = 0.5;
    c.omega = 1.0;
    auto fam = build_heat_family(grid, c);
    const double s2 = 0.25, t = 1.5, s = 0.25;
    Vec phi = gaussian_density(grid, s2);
    Vec got = fam->apply(t, s, phi);
    Vec expect = gaussian_density(grid, s2 + 2.0 * (t - s));
    for (double& e : expect) e *= std::exp(-(t - s));
    double sup = 0.0;
    for (int i = 0; i < grid.n(); ++i) sup = std::max(sup, std::fabs(got[i] - expect[i]));
    CHECK(sup <= 1e-4);
    CHECK(fam->constants().M == 1.0);
    CHECK(fam->constants().delta == 1.0);
    CHECK(!fam->has_unstable_part());
}

TEST_CASE("heat family: hypothesis violations are rejected by the probe") {
    SpatialGrid grid(10.0, 101);
    HeatCoefficients ok = periodic_coeffs();
    CHECK_NOTHROW(build_heat_family(grid, ok));

    HeatCoefficients bad_alpha = ok;
    bad_alpha.alpha_sig = TimeSignal::scalar([](double t) { return -2.0 + 1.2 * std::cos(t); });
    CHECK_THROWS_AS(build_heat_family(grid, bad_alpha), HypothesisError);

    HeatCoefficients bad_delta = ok;
    bad_delta.delta_sig = TimeSignal::scalar([](double t) { return 2.0 + 1.5 * std::sin(t); });
    CHECK_THROWS_AS(build_heat_family(grid, bad_delta), HypothesisError);
}

TEST_CASE("heat family: cocycle and decay on random samples") {
    SpatialGrid grid(20.0, 401);
    auto fam = build_heat_family(grid, quasiperiodic_coeffs());
    std::mt19937 rng(11u);
    std::uniform_real_distribution<double> ut(-8.0, 8.0), uspan(0.0, 3.0);

    for (int k = 0; k < 10; ++k) {
        const double s = ut(rng);
        const double r = s + uspan(rng);
        const double t = r + uspan(rng);
        Vec phi = random_bumps(grid, rng);
        Vec via = fam->apply(t, r, fam->apply(r, s, phi));
        Vec direct = fam->apply(t, s, phi);
        CHECK(grid.space().distance(via, direct) <= 1e-6);
    }
    for (int k = 0; k < 50; ++k) {
        const double s = ut(rng);
        const double t = s + uspan(rng);
        Vec phi = random_bumps(grid, rng);
        const double decayed = grid.space().norm(fam->apply(t, s, phi));
        CHECK(decayed <= std::exp(-1.6 * (t - s)) * grid.space().norm(phi) + 1e-8);
    }
}

TEST_CASE("bi-almost-automorphy defect of the heat family") {
    SpatialGrid grid(20.0, 401);
    std::mt19937 rng(3u);
    std::uniform_real_distribution<double> ut(-10.0, 10.0), uspan(0.2, 3.0);
    auto make_samples = [&](int n) {
        std::vector<std::tuple<double, double, Vec>> samples;
        for (int k = 0; k < n; ++k) {
            const double s = ut(rng);
            const double t = s + uspan(rng);
            samples.emplace_back(t, s, random_bumps(grid, rng));
        }
        return samples;
    };

    auto periodic = build_heat_family(grid, periodic_coeffs());
    auto samples = make_samples(20);
    CHECK(bi_aa_family_defect(*periodic, 2.0 * std::numbers::pi, samples) <= 1e-8);

    auto quasi = build_heat_family(grid, quasiperiodic_coeffs());
    long q = 0;
    const double ratios[] = {std::numbers::sqrt2};
    const double tau = find_near_period(ratios, 1000, 2.0 * std::numbers::pi, &q);
    CHECK(q == 985);
    CHECK(bi_aa_family_defect(*quasi, tau, make_samples(20)) < 0.05);
}

TEST_CASE("section-4 problem assembly, admissibility and thresholds") {
    SpatialGrid grid(20.0, 201);
    HeatCoefficients coeffs = periodic_coeffs();
    const WeightedMeasure mu = WeightedMeasure::paper_sec4();

    // threshold arithmetic for (M = 1, omega = 1.5, p = 1)
    ContractionReport rep = contraction_factor({1.0, 1.5}, StepanovParams(1.0), 0.0);
    CHECK(rep.threshold == doctest::Approx((1.0 - std::exp(-1.5)) / 2.0).epsilon(1e-12));
    CHECK(rep.threshold == doctest::Approx(0.3884349199257851).epsilon(1e-12));

    // tanh nonlinearity with L_g = 1: a probe over the settled positive range
    // (where the arctan drift has decayed) is admissible...
    Sec4Nonlinearity tanh_nl;
    tanh_nl.a_sig = TimeSignal::scalar([](double t) { return 0.05 * std::sin(t); });
    tanh_nl.L_g = 1.0;
    tanh_nl.g_map = [](const Vec& phi) {
        Vec out(phi.size());
        for (std::size_t i = 0; i < phi.size(); ++i) out[i] = std::tanh(phi[i]);
        return out;
    };
    SemilinearProblem settled = build_sec4_problem(grid, coeffs, tanh_nl, mu,
                                                   StepanovParams(1.0), 0.0, 0.0, {3.0, 60.0});
    CHECK(contraction_factor({1.0, 1.5}, settled.stepanov, settled.lip_norm).admissible);
    CHECK(settled.measure_satisfies_M);
    CHECK(settled.f.claimed_class == SignalClass::SpMuPAA);

    // ...but the default probe range sees the full arctan drift and rejects it
    SemilinearProblem global = build_sec4_problem(grid, coeffs, tanh_nl, mu, StepanovParams(1.0));
    CHECK(!contraction_factor({1.0, 1.5}, global.stepanov, global.lip_norm).admissible);

    // scaled nonlinearity is admissible with the honest global bound
    Sec4Nonlinearity small = tanh_nl;
    small.L_g = 0.1;
    small.g_map = [](const Vec& phi) {
        Vec out(phi.size());
        for (std::size_t i = 0; i < phi.size(); ++i) out[i] = 0.1 * std::tanh(phi[i]);
        return out;
    };
    SemilinearProblem ok = build_sec4_problem(grid, coeffs, small, mu, StepanovParams(1.0));
    CHECK(contraction_factor({1.0, 1.5}, ok.stepanov, ok.lip_norm).admissible);

    // zero nonlinearity: the unique bounded mild solution is zero
    Sec4Nonlinearity zero = tanh_nl;
    zero.L_g = 0.0;
    zero.g_map = [](const Vec& phi) { return Vec(phi.size(), 0.0); };
    SemilinearProblem trivial = build_sec4_problem(grid, coeffs, zero, mu, StepanovParams(1.0));
    trivial.forcing_sup_bound = 1e-30;
    SeriesControl ctrl{1, 16, 1e-8};
    UniformGrid tgrid{0.0, 2.0, 21};
    TimeSignal u0(grid.space(), [n = grid.n()](double) { return Vec(n, 0.0); });
    IterationTrace trace = picard_iterate(trivial, ctrl, tgrid, u0, 5, 1e-10);
    CHECK(trace.converged);
    CHECK(grid.space().norm(trace.iterates.back()(1.0)) == 0.0);
}

TEST_CASE("misdeclared Lipschitz modulus is caught by sampling") {
    SpatialGrid grid(10.0, 51);
    SemilinearProblem prob;
    prob.green = GreenFunction(build_heat_family(grid, periodic_coeffs()));
    prob.f.in_dim = prob.f.out_dim = grid.n();
    prob.f.map = [](double, const Vec& u) {
        Vec out(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) out[i] = 2.0 * u[i];
        return out;
    };
    prob.lip_modulus = TimeSignal::scalar([](double) { return 0.5 ; });  // understated
    prob.stepanov = StepanovParams(1.0);
    prob.lip_norm = 0.5;
    CHECK_THROWS_AS(validate_lipschitz(prob, {-5.0, 5.0}, 1.0, 32, 99u), HypothesisError);
}
