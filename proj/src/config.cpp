#include "evo/config.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "evo/errors.hpp"
#include "evo/heat.hpp"

namespace evo::cli {

void check_keys(const json& obj, std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional, const std::string& ctx) {
    if (!obj.is_object()) throw ValidationError(ctx + ": expected a JSON object");
    std::set<std::string> allowed;
    for (const char* k : required) allowed.insert(k);
    for (const char* k : optional) allowed.insert(k);
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) throw ValidationError(ctx + ": unknown key '" + key + "'");
    }
    for (const char* k : required)
        if (!obj.contains(k)) throw ValidationError(ctx + ": missing key '" + std::string(k) + "'");
}

double get_number(const json& obj, const char* key, const std::string& ctx) {
    if (!obj.contains(key)) throw ValidationError(ctx + ": missing key '" + key + "'");
    if (!obj[key].is_number()) throw ValidationError(ctx + ": key '" + key + "' must be a number");
    return obj[key].get<double>();
}

double get_number_or(const json& obj, const char* key, double def, const std::string& ctx) {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_number()) throw ValidationError(ctx + ": key '" + key + "' must be a number");
    return obj[key].get<double>();
}

int get_int_or(const json& obj, const char* key, int def, const std::string& ctx) {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_number_integer()) throw ValidationError(ctx + ": key '" + key + "' must be an integer");
    return obj[key].get<int>();
}

bool get_bool_or(const json& obj, const char* key, bool def, const std::string& ctx) {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_boolean()) throw ValidationError(ctx + ": key '" + key + "' must be a boolean");
    return obj[key].get<bool>();
}

int TimeRange::count() const {
    if (!(step > 0.0)) throw ValidationError("time range: step must be > 0");
    if (!(to >= from)) throw ValidationError("time range: to must be >= from");
    return static_cast<int>(std::floor((to - from) / step + 1e-9)) + 1;
}

TimeRange parse_time_range_string(const std::string& s) {
    TimeRange r;
    std::istringstream is(s);
    char c1 = 0, c2 = 0;
    if (!(is >> r.from >> c1 >> r.to >> c2 >> r.step) || c1 != ':' || c2 != ':')
        throw ValidationError("time range: expected 'from:to:step', got '" + s + "'");
    (void)r.count();
    return r;
}

TimeRange parse_time_range(const json& j, const std::string& ctx) {
    if (j.is_string()) return parse_time_range_string(j.get<std::string>());
    check_keys(j, {"from", "to", "step"}, {}, ctx);
    TimeRange r;
    r.from = get_number(j, "from", ctx);
    r.to = get_number(j, "to", ctx);
    r.step = get_number(j, "step", ctx);
    (void)r.count();
    return r;
}

namespace {

TimeSignal make_trig_sum(const json& desc) {
    check_keys(desc, {"kind", "terms"}, {"offset"}, "signal trig_sum");
    struct Term {
        double amplitude, omega, phase;
    };
    std::vector<Term> terms;
    if (!desc["terms"].is_array()) throw ValidationError("trig_sum: 'terms' must be an array");
    for (const json& t : desc["terms"]) {
        check_keys(t, {"amplitude", "omega"}, {"phase"}, "trig_sum term");
        terms.push_back({get_number(t, "amplitude", "trig_sum term"),
                         get_number(t, "omega", "trig_sum term"),
                         get_number_or(t, "phase", 0.0, "trig_sum term")});
    }
    const double offset = get_number_or(desc, "offset", 0.0, "trig_sum");
    return TimeSignal::scalar([terms, offset](double t) {
        double v = offset;
        for (const Term& term : terms) v += term.amplitude * std::sin(term.omega * t + term.phase);
        return v;
    });
}

}  // namespace

TimeSignal make_signal(const json& desc) {
    if (!desc.is_object() || !desc.contains("kind"))
        throw ValidationError("signal descriptor: missing 'kind'");
    const std::string kind = desc["kind"].get<std::string>();
    if (kind == "const") {
        check_keys(desc, {"kind", "value"}, {}, "signal const");
        const json& v = desc["value"];
        if (v.is_number()) return TimeSignal::constant({v.get<double>()});
        if (v.is_array()) {
            Vec vec;
            for (const json& c : v) {
                if (!c.is_number()) throw ValidationError("signal const: non-numeric entry");
                vec.push_back(c.get<double>());
            }
            if (vec.empty()) throw ValidationError("signal const: empty value");
            return TimeSignal::constant(std::move(vec));
        }
        throw ValidationError("signal const: 'value' must be a number or array");
    }
    if (kind == "sin") {
        check_keys(desc, {"kind"}, {"amplitude", "omega", "phase", "offset"}, "signal sin");
        const double a = get_number_or(desc, "amplitude", 1.0, "sin");
        const double w = get_number_or(desc, "omega", 1.0, "sin");
        const double ph = get_number_or(desc, "phase", 0.0, "sin");
        const double off = get_number_or(desc, "offset", 0.0, "sin");
        return TimeSignal::scalar([a, w, ph, off](double t) { return off + a * std::sin(w * t + ph); });
    }
    if (kind == "trig_sum") return make_trig_sum(desc);
    if (kind == "aa_example") {
        check_keys(desc, {"kind"}, {}, "signal aa_example");
        return TimeSignal::scalar([](double t) {
            return std::sin(1.0 / (2.0 + std::cos(t) + std::cos(std::numbers::sqrt2 * t)));
        }).tagged(SignalClass::AA);
    }
    if (kind == "arctan_drift") {
        check_keys(desc, {"kind"}, {}, "signal arctan_drift");
        return TimeSignal::scalar([](double t) { return std::atan(t) - 0.5 * std::numbers::pi; })
            .tagged(SignalClass::MuErgodic);
    }
    if (kind == "sum" || kind == "product") {
        const char* list_key = kind == "sum" ? "terms" : "factors";
        check_keys(desc, {"kind", list_key}, {}, "signal " + kind);
        const json& list = desc[list_key];
        if (!list.is_array() || list.empty())
            throw ValidationError("signal " + kind + ": '" + list_key + "' must be a non-empty array");
        TimeSignal acc = make_signal(list[0]);
        for (std::size_t i = 1; i < list.size(); ++i)
            acc = kind == "sum" ? signal_sum(acc, make_signal(list[i]))
                                : signal_product(acc, make_signal(list[i]));
        return acc;
    }
    throw ValidationError("signal descriptor: unknown kind '" + kind + "'");
}

WeightedMeasure make_measure(const json& desc) {
    if (!desc.is_object() || !desc.contains("kind"))
        throw ValidationError("measure descriptor: missing 'kind'");
    check_keys(desc, {"kind"}, {}, "measure");
    const std::string kind = desc["kind"].get<std::string>();
    if (kind == "lebesgue") return WeightedMeasure::lebesgue();
    if (kind == "paper_sec4") return WeightedMeasure::paper_sec4();
    throw ValidationError("measure descriptor: unknown kind '" + kind + "'");
}

StepanovParams make_stepanov(const json* desc) {
    if (!desc || desc->is_null()) return StepanovParams(1.0, 64);
    check_keys(*desc, {}, {"p", "window_nodes"}, "stepanov");
    return StepanovParams(get_number_or(*desc, "p", 1.0, "stepanov"),
                          get_int_or(*desc, "window_nodes", 64, "stepanov"));
}

std::shared_ptr<const DichotomyFamily> make_family(const json& desc) {
    if (!desc.is_object() || !desc.contains("kind"))
        throw ValidationError("family descriptor: missing 'kind'");
    const std::string kind = desc["kind"].get<std::string>();
    if (kind == "diagonal") {
        check_keys(desc, {"kind", "rates"}, {"M", "delta"}, "family diagonal");
        if (!desc["rates"].is_array()) throw ValidationError("family diagonal: 'rates' must be an array");
        std::vector<double> rates;
        for (const json& r : desc["rates"]) rates.push_back(r.get<double>());
        auto family = make_diagonal_family(std::move(rates));
        // explicit constants, when present, must not be stronger than the
        // analytic ones
        if (desc.contains("M") || desc.contains("delta")) {
            const DichotomyConstants analytic = family->constants();
            const double M = get_number_or(desc, "M", analytic.M, "family diagonal");
            const double d = get_number_or(desc, "delta", analytic.delta, "family diagonal");
            if (M < analytic.M || d > analytic.delta + 1e-15)
                throw ValidationError("family diagonal: declared constants stronger than analytic ones");
        }
        return family;
    }
    if (kind == "scalar_alpha") {
        check_keys(desc, {"kind", "alpha", "omega"}, {"probe_from", "probe_to", "probe_step"},
                   "family scalar_alpha");
        Interval probe{get_number_or(desc, "probe_from", -50.0, "scalar_alpha"),
                       get_number_or(desc, "probe_to", 50.0, "scalar_alpha")};
        return make_scalar_timevarying_family(make_signal(desc["alpha"]),
                                              get_number(desc, "omega", "scalar_alpha"), probe,
                                              get_number_or(desc, "probe_step", 0.05, "scalar_alpha"));
    }
    if (kind == "heat_sec4") {
        check_keys(desc, {"kind", "grid", "delta", "alpha", "delta_floor", "omega"}, {},
                   "family heat_sec4");
        check_keys(desc["grid"], {"L", "n"}, {}, "heat grid");
        SpatialGrid grid(get_number(desc["grid"], "L", "heat grid"),
                         get_int_or(desc["grid"], "n", 0, "heat grid"));
        HeatCoefficients coeffs;
        coeffs.delta_sig = make_signal(desc["delta"]);
        coeffs.alpha_sig = make_signal(desc["alpha"]);
        coeffs.delta_floor = get_number(desc, "delta_floor", "heat_sec4");
        coeffs.omega = get_number(desc, "omega", "heat_sec4");
        return build_heat_family(grid, coeffs);
    }
    throw ValidationError("family descriptor: unknown kind '" + kind + "'");
}

}  // namespace evo::cli
