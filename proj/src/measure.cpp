#include "evo/measure.hpp"

#include <cmath>
#include <sstream>

#include "evo/quadrature.hpp"

namespace evo {

WeightedMeasure WeightedMeasure::lebesgue() {
    WeightedMeasure m;
    m.name_ = "lebesgue";
    m.density_ = [](double) { return 1.0; };
    m.satisfies_M_ = true;
    return m;
}

WeightedMeasure WeightedMeasure::paper_sec4() {
    WeightedMeasure m;
    m.name_ = "paper_sec4";
    m.density_ = [](double t) { return t <= 0.0 ? std::exp(t) : 1.0; };
    m.satisfies_M_ = true;
    return m;
}

WeightedMeasure WeightedMeasure::custom(std::string name,
                                        std::function<double(double)> density) {
    WeightedMeasure m;
    m.name_ = std::move(name);
    m.density_ = std::move(density);
    m.satisfies_M_ = false;  // only probed diagnostically
    return m;
}

double WeightedMeasure::density(double t) const {
    if (!density_) throw ValidationError("WeightedMeasure: empty measure");
    const double d = density_(t);
    if (!std::isfinite(d) || d < 0.0) {
        std::ostringstream os;
        os << "WeightedMeasure '" << name_ << "': invalid density " << d << " at t=" << t;
        throw ValidationError(os.str());
    }
    return d;
}

double WeightedMeasure::mass(double a, double b) const {
    if (!density_) throw ValidationError("WeightedMeasure: empty measure");
    if (b < a) std::swap(a, b);
    const double v = quad::adaptive_simpson([this](double t) { return density(t); }, a, b, 1e-11);
    if (v < -1e-9) {
        std::ostringstream os;
        os << "WeightedMeasure '" << name_ << "': negative mass " << v << " on [" << a << "," << b << "]";
        throw ValidationError(os.str());
    }
    return std::max(v, 0.0);
}

}  // namespace evo
