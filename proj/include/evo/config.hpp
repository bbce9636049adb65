#pragma once

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "evo/dichotomy.hpp"
#include "evo/measure.hpp"
#include "evo/signal.hpp"
#include "evo/stepanov.hpp"

namespace evo::cli {

using nlohmann::json;

/// Rejects unknown keys and reports missing required ones.
void check_keys(const json& obj, std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional, const std::string& ctx);

double get_number(const json& obj, const char* key, const std::string& ctx);
double get_number_or(const json& obj, const char* key, double def, const std::string& ctx);
int get_int_or(const json& obj, const char* key, int def, const std::string& ctx);
bool get_bool_or(const json& obj, const char* key, bool def, const std::string& ctx);

struct TimeRange {
    double from = 0.0;
    double to = 1.0;
    double step = 0.1;
    int count() const;  ///< number of grid points, endpoints included
};

/// Accepts {"from":a,"to":b,"step":h} or the string "a:b:h".
TimeRange parse_time_range(const json& j, const std::string& ctx);
TimeRange parse_time_range_string(const std::string& s);

/// Signal catalog: const, sin, trig_sum, aa_example, arctan_drift, sum, product.
TimeSignal make_signal(const json& desc);

/// Measure catalog: lebesgue, paper_sec4.
WeightedMeasure make_measure(const json& desc);

/// Family catalog: diagonal, scalar_alpha, heat_sec4.
std::shared_ptr<const DichotomyFamily> make_family(const json& desc);

StepanovParams make_stepanov(const json* desc);

}  // namespace evo::cli
