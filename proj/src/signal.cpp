#include "evo/signal.hpp"

#include <cmath>
#include <sstream>

#include "evo/errors.hpp"

namespace evo {

const char* signal_class_name(SignalClass c) {
    switch (c) {
        case SignalClass::AP: return "AP";
        case SignalClass::AA: return "AA";
        case SignalClass::SpAA: return "SpAA";
        case SignalClass::MuErgodic: return "muErgodic";
        case SignalClass::MuPAA: return "muPAA";
        case SignalClass::SpMuPAA: return "SpMuPAA";
    }
    return "?";
}

TimeSignal TimeSignal::constant(Vec value) {
    const StateSpace space = StateSpace::sup(static_cast<int>(value.size()));
    return TimeSignal(space, [v = std::move(value)](double) { return v; });
}

TimeSignal TimeSignal::scalar(std::function<double(double)> f) {
    return TimeSignal(StateSpace::sup(1),
                      [fn = std::move(f)](double t) { return Vec{fn(t)}; });
}

Vec TimeSignal::operator()(double t) const {
    if (!eval_) throw ValidationError("TimeSignal: evaluating an empty signal");
    Vec v = eval_(t);
    if (static_cast<int>(v.size()) != space_.dim())
        throw ValidationError("TimeSignal: evaluator returned wrong dimension");
    for (double c : v) {
        if (!std::isfinite(c)) {
            std::ostringstream os;
            os << "TimeSignal: non-finite value at t=" << t;
            throw EvaluationError(os.str());
        }
    }
    return v;
}

double TimeSignal::value1(double t) const {
    if (dim() != 1) throw ValidationError("TimeSignal::value1 requires dim()==1");
    return (*this)(t)[0];
}

TimeSignal TimeSignal::tagged(SignalClass cls) const {
    TimeSignal s = *this;
    auto meta = std::make_shared<ClassDecomposition>();
    meta->claimed_class = cls;
    s.meta_ = std::move(meta);
    return s;
}

TimeSignal TimeSignal::with_decomposition(std::shared_ptr<const TimeSignal> aa,
                                          std::shared_ptr<const TimeSignal> ergodic,
                                          SignalClass cls, bool validate) const {
    if (!aa || !ergodic)
        throw ValidationError("with_decomposition: both parts required");
    if (aa->dim() != dim() || ergodic->dim() != dim())
        throw ValidationError("with_decomposition: part dimension mismatch");
    if (validate) {
        const int samples = 1000;
        const double lo = -50.0, hi = 50.0;
        for (int i = 0; i < samples; ++i) {
            const double t = lo + (hi - lo) * i / (samples - 1);
            const Vec p = (*this)(t);
            const Vec sum = vec_sum((*aa)(t), (*ergodic)(t));
            if (space_.distance(p, sum) > 1e-12) {
                std::ostringstream os;
                os << "decomposition mismatch at t=" << t << ": |parent - (aa+ergodic)| = "
                   << space_.distance(p, sum);
                throw ValidationError(os.str());
            }
        }
    }
    TimeSignal s = *this;
    auto meta = std::make_shared<ClassDecomposition>();
    meta->aa_part = std::move(aa);
    meta->ergodic_part = std::move(ergodic);
    meta->claimed_class = cls;
    s.meta_ = std::move(meta);
    return s;
}

TimeSignal signal_sum(const TimeSignal& a, const TimeSignal& b) {
    if (a.dim() != b.dim()) throw ValidationError("signal_sum: dimension mismatch");
    return TimeSignal(a.space(), [a, b](double t) { return vec_sum(a(t), b(t)); });
}

TimeSignal signal_product(const TimeSignal& a, const TimeSignal& b) {
    if (a.dim() != b.dim()) throw ValidationError("signal_product: dimension mismatch");
    return TimeSignal(a.space(), [a, b](double t) {
        Vec x = a(t), y = b(t);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] *= y[i];
        return x;
    });
}

TimeSignal signal_scale(double c, const TimeSignal& a) {
    return TimeSignal(a.space(), [c, a](double t) { return vec_scaled(a(t), c); });
}

namespace {

struct GridData {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<Vec> values;
};

Vec grid_eval(const GridData& g, double t) {
    const int m = static_cast<int>(g.values.size());
    if (t <= g.t0) return g.values.front();
    const double t_end = g.t0 + g.dt * (m - 1);
    if (t >= t_end) return g.values.back();
    if (m < 4) {  // linear fallback for tiny grids
        int i = static_cast<int>((t - g.t0) / g.dt);
        i = std::min(i, m - 2);
        const double u = (t - (g.t0 + i * g.dt)) / g.dt;
        Vec out(g.values[i].size());
        for (std::size_t c = 0; c < out.size(); ++c)
            out[c] = (1.0 - u) * g.values[i][c] + u * g.values[i + 1][c];
        return out;
    }
    int i = static_cast<int>((t - g.t0) / g.dt);
    i = std::min(i, m - 2);
    const int il = std::min(std::max(i - 1, 0), m - 4);
    const double xi = (t - (g.t0 + il * g.dt)) / g.dt;  // in [0, 3]
    // cubic Lagrange on the 4-point stencil il..il+3
    const double c0 = -(xi - 1.0) * (xi - 2.0) * (xi - 3.0) / 6.0;
    const double c1 = xi * (xi - 2.0) * (xi - 3.0) / 2.0;
    const double c2 = -xi * (xi - 1.0) * (xi - 3.0) / 2.0;
    const double c3 = xi * (xi - 1.0) * (xi - 2.0) / 6.0;
    const Vec& y0 = g.values[il];
    const Vec& y1 = g.values[il + 1];
    const Vec& y2 = g.values[il + 2];
    const Vec& y3 = g.values[il + 3];
    Vec out(y0.size());
    for (std::size_t c = 0; c < out.size(); ++c)
        out[c] = c0 * y0[c] + c1 * y1[c] + c2 * y2[c] + c3 * y3[c];
    return out;
}

}  // namespace

TimeSignal grid_signal(double t0, double dt, std::vector<Vec> values, StateSpace space) {
    if (values.size() < 2) throw ValidationError("grid_signal: need at least 2 grid values");
    if (!(dt > 0.0)) throw ValidationError("grid_signal: dt must be positive");
    for (const Vec& v : values)
        if (static_cast<int>(v.size()) != space.dim())
            throw ValidationError("grid_signal: value dimension mismatch");
    auto data = std::make_shared<GridData>();
    data->t0 = t0;
    data->dt = dt;
    data->values = std::move(values);
    return TimeSignal(space, [data](double t) { return grid_eval(*data, t); });
}

}  // namespace evo
