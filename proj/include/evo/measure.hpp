#pragma once

#include <functional>
#include <string>

#include "evo/errors.hpp"

namespace evo {

/// Measure on the line given by a density (Radon-Nikodym derivative) rho.
/// Named constructors assert admissibility (hypothesis (M), infinite total
/// mass); for custom densities the flag stays false and the translation
/// diagnostic is the only probe.
class WeightedMeasure {
public:
    WeightedMeasure() = default;

    static WeightedMeasure lebesgue();
    /// Density e^t for t <= 0 and 1 for t > 0.
    static WeightedMeasure paper_sec4();
    static WeightedMeasure custom(std::string name, std::function<double(double)> density);

    double density(double t) const;
    /// mu([a, b]) by adaptive quadrature; must come out >= -1e-9.
    double mass(double a, double b) const;

    const std::string& name() const { return name_; }
    bool satisfies_M() const { return satisfies_M_; }

private:
    std::string name_;
    std::function<double(double)> density_;
    bool satisfies_M_ = false;
};

}  // namespace evo
