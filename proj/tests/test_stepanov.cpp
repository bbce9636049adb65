#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "evo/measure.hpp"
#include "evo/stepanov.hpp"

using namespace evo;

namespace {

TimeSignal sin_signal() {
    return TimeSignal::scalar([](double t) { return std::sin(t); });
}

TimeSignal aa_example() {
    return TimeSignal::scalar([](double t) {
        return std::sin(1.0 / (2.0 + std::cos(t) + std::cos(std::numbers::sqrt2 * t)));
    });
}

TimeSignal arctan_drift() {
    return TimeSignal::scalar([](double t) { return std::atan(t) - 0.5 * std::numbers::pi; });
}

}  // namespace

TEST_CASE("stepanov params store the conjugate exponent exactly") {
    StepanovParams p1(1.0);
    CHECK(p1.q_infinite());
    CHECK_THROWS_AS(p1.q(), ValidationError);
    StepanovParams p2(2.0);
    CHECK(p2.q() == doctest::Approx(2.0).epsilon(1e-15));
    StepanovParams p3(3.0);
    CHECK(1.0 / p3.p() + 1.0 / p3.q() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(StepanovParams(0.5), ValidationError);
}

TEST_CASE("stepanov norm of a constant is the constant") {
    TimeSignal c = TimeSignal::constant({std::sqrt(2.0)});
    for (double p : {1.0, 2.0, 3.5}) {
        const double v = stepanov_norm(c, StepanovParams(p), {-5.0, 5.0}, 0.5);
        CHECK(v == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
}

TEST_CASE("stepanov norm of sin at p=1 matches the closed-form window maximum") {
    // max_t int_t^{t+1} |sin| = 2 sin(1/2), attained at t = pi/2 - 1/2
    const double expected = 2.0 * std::sin(0.5);
    const double v = stepanov_norm(sin_signal(), StepanovParams(1.0, 128),
                                   {0.0, 2.0 * std::numbers::pi}, 0.01);
    CHECK(std::fabs(v - expected) < 5e-5);
    CHECK(v <= expected + 1e-12);  // grid max is a lower approximation
}

TEST_CASE("the almost automorphic example is Stepanov-bounded by 1") {
    const double v = stepanov_norm(aa_example(), StepanovParams(1.0), {0.0, 30.0}, 0.1);
    CHECK(v <= 1.0 + 1e-12);
    CHECK(v > 0.0);
}

TEST_CASE("window p-means are monotone in p and satisfy the triangle inequality") {
    std::mt19937 rng(91);
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    for (int rep = 0; rep < 8; ++rep) {
        const double a1 = amp(rng), a2 = amp(rng), w2 = 1.0 + std::fabs(amp(rng));
        TimeSignal f = TimeSignal::scalar(
            [a1, a2, w2](double t) { return a1 * std::sin(t) + a2 * std::cos(w2 * t); });
        TimeSignal g = TimeSignal::scalar([a2](double t) { return a2 * std::sin(0.7 * t); });
        const Interval range{-3.0, 3.0};
        const double step = 0.25;
        const double n1 = stepanov_norm(f, StepanovParams(1.0), range, step);
        const double n2 = stepanov_norm(f, StepanovParams(2.0), range, step);
        const double n4 = stepanov_norm(f, StepanovParams(4.0), range, step);
        CHECK(n1 <= n2 + 1e-12);
        CHECK(n2 <= n4 + 1e-12);

        const double nf = stepanov_norm(f, StepanovParams(2.0), range, step);
        const double ng = stepanov_norm(g, StepanovParams(2.0), range, step);
        const double nfg = stepanov_norm(signal_sum(f, g), StepanovParams(2.0), range, step);
        CHECK(nfg <= nf + ng + 1e-12);
    }
}

TEST_CASE("ergodic mean of a constant is the constant; homogeneity holds") {
    TimeSignal c = TimeSignal::constant({0.75});
    for (const WeightedMeasure& mu : {WeightedMeasure::lebesgue(), WeightedMeasure::paper_sec4()}) {
        CHECK(ergodic_mean(c, mu, 10.0, 0.05) == doctest::Approx(0.75).epsilon(1e-10));
        CHECK(ergodic_mean(c, mu, 200.0, 0.1) == doctest::Approx(0.75).epsilon(1e-10));
    }
    TimeSignal f = arctan_drift();
    const WeightedMeasure mu = WeightedMeasure::paper_sec4();
    const double base = ergodic_mean(f, mu, 50.0, 0.05);
    const double scaled = ergodic_mean(signal_scale(3.0, f), mu, 50.0, 0.05);
    CHECK(scaled == doctest::Approx(3.0 * base).epsilon(1e-12));
}

TEST_CASE("arctan drift is ergodic for the section-4 measure and for Lebesgue") {
    TimeSignal f = arctan_drift();
    const WeightedMeasure mu = WeightedMeasure::paper_sec4();
    const double m10 = ergodic_mean(f, mu, 10.0, 0.01);
    const double m100 = ergodic_mean(f, mu, 100.0, 0.01);
    const double m1000 = ergodic_mean(f, mu, 1000.0, 0.01);
    CHECK(m10 > m100);
    CHECK(m100 > m1000);
    CHECK(m1000 <= 0.02);
    CHECK(m1000 == doctest::Approx(0.010090).epsilon(0.05));

    // under Lebesgue the drift is NOT ergodic: |arctan t - pi/2| tends to pi
    // on the negative axis, so the mean settles near pi/2 instead of decaying
    // (the exponential left tail of the section-4 density is what makes the
    // drift ergodic there)
    const double lm1000 = ergodic_mean(f, WeightedMeasure::lebesgue(), 1000.0, 0.01);
    CHECK(lm1000 == doctest::Approx(0.5 * std::numbers::pi).epsilon(5e-3));
}

TEST_CASE("degenerate measures are rejected") {
    WeightedMeasure zero = WeightedMeasure::custom("zero", [](double) { return 0.0; });
    CHECK_THROWS_AS(ergodic_mean(arctan_drift(), zero, 5.0, 0.05), HypothesisError);
}

TEST_CASE("stepanov ergodic mean: zero, constant and drift examples") {
    const WeightedMeasure mu = WeightedMeasure::paper_sec4();
    const StepanovParams p1(1.0, 32);
    TimeSignal zero = TimeSignal::constant({0.0});
    CHECK(stepanov_ergodic_mean(zero, mu, p1, 50.0, 0.1) == doctest::Approx(0.0));
    TimeSignal c = TimeSignal::constant({1.25});
    CHECK(stepanov_ergodic_mean(c, mu, p1, 50.0, 0.1) == doctest::Approx(1.25).epsilon(1e-10));

    TimeSignal f = arctan_drift();
    const double m100 = stepanov_ergodic_mean(f, mu, p1, 100.0, 0.1);
    const double m1000 = stepanov_ergodic_mean(f, mu, p1, 1000.0, 0.1);
    CHECK(m1000 < m100);
    CHECK(m1000 <= 0.03);
}

TEST_CASE("shift defect: exact period, zero shift, half period") {
    const StepanovParams p1(1.0, 128);
    const Interval range{0.0, 2.0 * std::numbers::pi};
    CHECK(shift_defect(sin_signal(), 0.0, p1, range) == 0.0);
    CHECK(shift_defect(sin_signal(), 2.0 * std::numbers::pi, p1, range, 0.05) <= 1e-10);
    const double half = shift_defect(sin_signal(), std::numbers::pi, p1, range, 0.01);
    CHECK(half > 1.0);
    // worst window of int |sin(s+pi) - sin s| = 2 int |sin| peaks at 4 sin(1/2)
    CHECK(std::fabs(half - 4.0 * std::sin(0.5)) < 2e-3);
}

TEST_CASE("continued-fraction search finds a joint near-period of (2pi, 2pi/sqrt2)") {
    const std::vector<long> dens = convergent_denominators(std::numbers::sqrt2, 20000);
    CHECK(std::find(dens.begin(), dens.end(), 408L) != dens.end());
    CHECK(std::find(dens.begin(), dens.end(), 13860L) != dens.end());

    long q = 0;
    const double ratios[] = {std::numbers::sqrt2};
    const double tau = find_near_period(ratios, 20000, 2.0 * std::numbers::pi, &q);
    CHECK(q == 13860);
    CHECK(tau == doctest::Approx(2.0 * std::numbers::pi * 13860));

    const double defect = shift_defect(aa_example(), tau, StepanovParams(1.0, 128),
                                       {0.0, 20.0}, 0.05);
    CHECK(defect < 0.1);
}

TEST_CASE("bi-shift defect: periodic product kernel and convolution kernels") {
    const StateSpace s1 = StateSpace::sup(1);
    auto F = [](double t, double s) { return Vec{std::sin(t) * std::cos(s)}; };
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j)
            pairs.emplace_back(2.0 * std::numbers::pi * i / 11.0,
                               2.0 * std::numbers::pi * j / 11.0);

    CHECK(bi_shift_defect(F, s1, 2.0 * std::numbers::pi, pairs) <= 1e-12);

    const double quarter = bi_shift_defect(F, s1, 0.5 * std::numbers::pi, pairs);
    // dense-grid oracle: max |sin(t+pi/2)cos(s+pi/2) - sin t cos s| = max |sin(t+s)|
    double oracle = 0.0;
    for (const auto& [t, s] : pairs) oracle = std::max(oracle, std::fabs(std::sin(t + s)));
    CHECK(quarter == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(quarter > 0.5);

    auto K = [](double t, double s) { return Vec{std::exp(-(t - s) * (t - s)) + (t - s)}; };
    for (double tau : {0.3, 1.7, -2.9, 100.0})
        CHECK(bi_shift_defect(K, s1, tau, pairs) <= 1e-12);
}

TEST_CASE("measure translation diagnostic estimates the (M) constant") {
    std::vector<Interval> right;
    for (double a = 2.0; a <= 99.0; a += 8.0) right.push_back({a, a + 1.0});
    CHECK(measure_translation_diagnostic(WeightedMeasure::lebesgue(), 5.0, right) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(measure_translation_diagnostic(WeightedMeasure::paper_sec4(), 1.0, right) ==
          doctest::Approx(1.0).epsilon(1e-9));

    // left of the exclusion interval the exponential weights give e^{-1}
    std::vector<Interval> left;
    for (double a = -12.0; a <= -2.0; a += 2.0) left.push_back({a, a + 1.0});
    CHECK(measure_translation_diagnostic(WeightedMeasure::paper_sec4(), -1.0, left) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-6));

    WeightedMeasure spike = WeightedMeasure::custom(
        "spike", [](double t) { return std::fabs(t) < 1.0 ? 1.0 : 0.0; });
    std::vector<Interval> far{{10.0, 11.0}};
    CHECK_THROWS_AS(measure_translation_diagnostic(spike, 1.0, far), HypothesisError);
}

TEST_CASE("measure mass is additive and nonnegative; bad densities are rejected") {
    const WeightedMeasure mu = WeightedMeasure::paper_sec4();
    const double whole = mu.mass(-3.0, 4.0);
    CHECK(whole == doctest::Approx(mu.mass(-3.0, 0.5) + mu.mass(0.5, 4.0)).epsilon(1e-10));
    CHECK(whole == doctest::Approx((1.0 - std::exp(-3.0)) + 4.0).epsilon(1e-9));

    WeightedMeasure bad = WeightedMeasure::custom("bad", [](double t) { return -t; });
    CHECK_THROWS_AS(bad.density(1.0), ValidationError);
}
