#pragma once

#include <optional>
#include <string>

#include "evo/config.hpp"

namespace evo::cli {

/// Command-line overrides applied on top of the config file.
struct RunOverrides {
    std::optional<std::string> out_path;
    std::optional<TimeRange> times;
    std::optional<TimeRange> window;
    std::optional<double> tol;
    std::optional<unsigned> seed;
};

/// Validates and runs one scenario (linear | semilinear | rd_demo |
/// diagnostics), writes the configured outputs and returns the run report:
/// scenario echo, per-phase timings, certificates, output paths. Identical
/// configs produce identical CSV bytes.
json run_scenario(const json& config, const RunOverrides& overrides = {});

/// "%.17g" formatting used for all CSV numbers.
std::string format_double(double v);

}  // namespace evo::cli
