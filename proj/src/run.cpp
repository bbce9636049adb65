#include "evo/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "evo/errors.hpp"
#include "evo/fd_oracle.hpp"
#include "evo/green_solver.hpp"
#include "evo/heat.hpp"
#include "evo/picard.hpp"

namespace evo::cli {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file '" + path + "'");
    out << content;
}

std::string svg_path_for(const std::string& csv_path) {
    const auto dot = csv_path.rfind('.');
    if (dot == std::string::npos) return csv_path + ".svg";
    return csv_path.substr(0, dot) + ".svg";
}

struct Series {
    std::string name;
    std::vector<double> xs, ys;
};

// Minimal self-contained line chart; enough to eyeball solutions.
std::string svg_line_chart(const std::string& title, const std::vector<Series>& series) {
    const int W = 800, H = 480, ML = 60, MR = 20, MT = 40, MB = 40;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const Series& s : series)
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (first) {
                xmin = xmax = s.xs[i];
                ymin = ymax = s.ys[i];
                first = false;
            }
            xmin = std::min(xmin, s.xs[i]);
            xmax = std::max(xmax, s.xs[i]);
            ymin = std::min(ymin, s.ys[i]);
            ymax = std::max(ymax, s.ys[i]);
        }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double xs = (W - ML - MR) / (xmax - xmin);
    const double ys = (H - MT - MB) / (ymax - ymin);
    const char* colors[] = {"#1f66ad", "#c0392b", "#27ae60", "#8e44ad", "#e67e22", "#16a085"};
    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";
    svg << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
        << "</text>\n";
    svg << "<line x1='" << ML << "' y1='" << H - MB << "' x2='" << W - MR << "' y2='" << H - MB
        << "' stroke='black'/>\n";
    svg << "<line x1='" << ML << "' y1='" << MT << "' x2='" << ML << "' y2='" << H - MB
        << "' stroke='black'/>\n";
    svg << "<text x='" << ML << "' y='" << H - MB + 16 << "' font-size='11'>"
        << format_double(xmin) << "</text>\n";
    svg << "<text x='" << W - MR << "' y='" << H - MB + 16 << "' text-anchor='end' font-size='11'>"
        << format_double(xmax) << "</text>\n";
    svg << "<text x='" << ML - 4 << "' y='" << H - MB << "' text-anchor='end' font-size='11'>"
        << format_double(ymin) << "</text>\n";
    svg << "<text x='" << ML - 4 << "' y='" << MT + 8 << "' text-anchor='end' font-size='11'>"
        << format_double(ymax) << "</text>\n";
    int ci = 0;
    for (const Series& s : series) {
        svg << "<polyline fill='none' stroke='" << colors[ci % 6] << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            const double px = ML + (s.xs[i] - xmin) * xs;
            const double py = H - MB - (s.ys[i] - ymin) * ys;
            svg << px << "," << py << " ";
        }
        svg << "'/>\n";
        svg << "<text x='" << W - MR - 4 << "' y='" << MT + 14 * (ci + 1)
            << "' text-anchor='end' font-size='12' fill='" << colors[ci % 6] << "'>" << s.name
            << "</text>\n";
        ++ci;
    }
    svg << "</svg>\n";
    return svg.str();
}

struct OutputSpec {
    std::string path;
    bool want_svg = false;
    bool enabled = false;
};

OutputSpec parse_output(const json& config, const RunOverrides& ov) {
    OutputSpec spec;
    if (config.contains("output")) {
        check_keys(config["output"], {"path"}, {"format"}, "output");
        spec.path = config["output"]["path"].get<std::string>();
        spec.enabled = true;
        if (config["output"].contains("format")) {
            const std::string f = config["output"]["format"].get<std::string>();
            if (f == "svg")
                spec.want_svg = true;
            else if (f != "csv")
                throw ValidationError("output: format must be 'csv' or 'svg'");
        }
    }
    if (ov.out_path) {
        spec.path = *ov.out_path;
        spec.enabled = true;
    }
    return spec;
}

SeriesControl parse_control(const json& config, const RunOverrides& ov) {
    SeriesControl ctrl;
    if (config.contains("control")) {
        const json& c = config["control"];
        check_keys(c, {}, {"n_windows", "nodes_per_window", "tolerance"}, "control");
        ctrl.n_windows = get_int_or(c, "n_windows", 1, "control");
        ctrl.nodes_per_window = get_int_or(c, "nodes_per_window", 64, "control");
        ctrl.tolerance = get_number_or(c, "tolerance", 0.0, "control");
    }
    if (ov.tol) ctrl.tolerance = *ov.tol;
    if (ctrl.n_windows < 1) throw ValidationError("control: n_windows must be >= 1");
    if (ctrl.nodes_per_window < 2) throw ValidationError("control: nodes_per_window must be >= 2");
    if (ctrl.tolerance < 0.0) throw ValidationError("control: tolerance must be >= 0");
    return ctrl;
}

void require_schema(const json& config) {
    if (!config.is_object() || !config.contains("schema"))
        throw ValidationError("config: missing 'schema'");
    if (!config["schema"].is_number_integer() || config["schema"].get<int>() != 1)
        throw ValidationError("config: unsupported schema version");
}

// -------------------------------------------------------------------- linear

json run_linear(const json& config, const RunOverrides& ov) {
    check_keys(config, {"schema", "kind", "family", "forcing", "times"},
               {"stepanov", "g_norm", "control", "output"}, "linear config");
    const auto t_setup = Clock::now();
    auto family = make_family(config["family"]);
    TimeSignal forcing = make_signal(config["forcing"]);
    const json* stepj = config.contains("stepanov") ? &config["stepanov"] : nullptr;
    StepanovParams params = make_stepanov(stepj);
    SeriesControl ctrl = parse_control(config, ov);
    TimeRange times = ov.times ? *ov.times : parse_time_range(config["times"], "times");

    LinearProblem prob;
    if (config.contains("g_norm")) {
        prob.green = GreenFunction(family);
        prob.forcing = forcing;
        prob.stepanov = params;
        prob.g_norm = get_number(config, "g_norm", "linear config");
        if (!(prob.g_norm > 0.0)) throw ValidationError("linear config: g_norm must be > 0");
    } else {
        prob = linear_problem_with_probed_norm(GreenFunction(family), forcing, params,
                                               {times.from - 10.0, times.to + 10.0}, 0.25);
    }
    const double setup_ms = ms_since(t_setup);

    const auto t_solve = Clock::now();
    const int count = times.count();
    std::ostringstream csv;
    csv << "t";
    for (int d = 0; d < family->dim(); ++d) csv << ",u" << d;
    csv << ",tail_bound\n";
    double max_tail = 0.0;
    int n_windows = 0;
    std::vector<Series> series(static_cast<std::size_t>(family->dim()));
    for (int d = 0; d < family->dim(); ++d) series[d].name = "u" + std::to_string(d);
    for (int i = 0; i < count; ++i) {
        const double t = times.from + i * times.step;
        const LinearSolveResult r = solve_linear(prob, ctrl, t);
        max_tail = std::max(max_tail, r.tail_bound);
        n_windows = std::max(n_windows, r.n_windows);
        csv << format_double(t);
        for (int d = 0; d < family->dim(); ++d) {
            csv << "," << format_double(r.value[d]);
            series[d].xs.push_back(t);
            series[d].ys.push_back(r.value[d]);
        }
        csv << "," << format_double(r.tail_bound) << "\n";
    }
    const double solve_ms = ms_since(t_solve);

    const auto t_out = Clock::now();
    json outputs = json::array();
    const OutputSpec out = parse_output(config, ov);
    if (out.enabled) {
        write_file(out.path, csv.str());
        outputs.push_back(out.path);
        if (out.want_svg) {
            const std::string sp = svg_path_for(out.path);
            write_file(sp, svg_line_chart("bounded mild solution", series));
            outputs.push_back(sp);
        }
    }

    json report;
    report["schema"] = 1;
    report["kind"] = "linear";
    report["scenario"] = config;
    report["certificates"] = {{"g_norm", prob.g_norm},
                              {"n_windows", n_windows},
                              {"tail_bound", max_tail}};
    report["timings_ms"] = {{"setup", setup_ms}, {"solve", solve_ms}, {"output", ms_since(t_out)}};
    report["outputs"] = outputs;
    return report;
}

// ---------------------------------------------------------------- semilinear

struct OdeNonlinearity {
    TimeDependentMap f;
    TimeSignal lip_modulus;
    double lip_norm = 0.0;
};

OdeNonlinearity make_ode_nonlinearity(const json& desc, int dim) {
    if (!desc.is_object() || !desc.contains("kind"))
        throw ValidationError("nonlinearity: missing 'kind'");
    const std::string kind = desc["kind"].get<std::string>();
    OdeNonlinearity nl;
    nl.f.in_dim = nl.f.out_dim = dim;
    if (kind == "zero") {
        check_keys(desc, {"kind"}, {}, "nonlinearity zero");
        nl.f.map = [dim](double, const Vec&) { return Vec(static_cast<std::size_t>(dim), 0.0); };
        nl.lip_modulus = TimeSignal::scalar([](double) { return 0.0; });
        return nl;
    }
    if (kind == "forcing_only") {
        check_keys(desc, {"kind", "signal"}, {}, "nonlinearity forcing_only");
        TimeSignal g = make_signal(desc["signal"]);
        if (g.dim() != dim) throw ValidationError("nonlinearity: signal dimension mismatch");
        nl.f.map = [g](double t, const Vec&) { return g(t); };
        nl.lip_modulus = TimeSignal::scalar([](double) { return 0.0; });
        return nl;
    }
    if (kind == "linear_plus_signal") {
        check_keys(desc, {"kind", "coeff", "signal"}, {}, "nonlinearity linear_plus_signal");
        const double coeff = get_number(desc, "coeff", "nonlinearity");
        TimeSignal g = make_signal(desc["signal"]);
        if (g.dim() != dim) throw ValidationError("nonlinearity: signal dimension mismatch");
        nl.f.map = [g, coeff](double t, const Vec& u) {
            Vec out = g(t);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeff * u[i];
            return out;
        };
        const double lip = std::fabs(coeff);
        nl.lip_modulus = TimeSignal::scalar([lip](double) { return lip; });
        nl.lip_norm = lip;  // exact Stepanov norm of a constant modulus
        return nl;
    }
    throw ValidationError("nonlinearity: unknown kind '" + kind + "'");
}

json run_semilinear(const json& config, const RunOverrides& ov) {
    check_keys(config, {"schema", "kind", "family", "nonlinearity", "window"},
               {"stepanov", "lip_norm", "control", "tol", "max_iter", "output",
                "override_admissibility"},
               "semilinear config");
    const auto t_setup = Clock::now();
    auto family = make_family(config["family"]);
    const json* stepj = config.contains("stepanov") ? &config["stepanov"] : nullptr;
    StepanovParams params = make_stepanov(stepj);
    SeriesControl ctrl = parse_control(config, ov);
    TimeRange window = ov.window ? *ov.window : parse_time_range(config["window"], "window");
    const double tol = ov.tol ? *ov.tol : get_number_or(config, "tol", 1e-8, "semilinear");
    if (!(tol > 0.0)) throw ValidationError("semilinear: tol must be > 0");
    const int max_iter = get_int_or(config, "max_iter", 50, "semilinear");
    const bool override_adm = get_bool_or(config, "override_admissibility", false, "semilinear");

    OdeNonlinearity nl = make_ode_nonlinearity(config["nonlinearity"], family->dim());
    SemilinearProblem prob;
    prob.green = GreenFunction(family);
    prob.f = nl.f;
    prob.lip_modulus = nl.lip_modulus;
    prob.stepanov = params;
    prob.lip_norm = get_number_or(config, "lip_norm", nl.lip_norm, "semilinear");

    UniformGrid grid{window.from, window.to, window.count()};
    TimeSignal u0 = TimeSignal(family->space(), [n = family->dim()](double) {
        return Vec(static_cast<std::size_t>(n), 0.0);
    });
    const double setup_ms = ms_since(t_setup);

    const auto t_solve = Clock::now();
    IterationTrace trace = picard_iterate(prob, ctrl, grid, u0, max_iter, tol, override_adm);
    if (!trace.converged)
        throw ConvergenceError("semilinear: picard iteration did not reach tolerance",
                               trace.sup_deltas.empty() ? 0.0 : trace.sup_deltas.back());
    const TimeSignal& u = trace.iterates.back();

    // residual certificate over seeded pairs inside the window
    std::mt19937 rng(ov.seed ? *ov.seed : 12345u);
    std::uniform_real_distribution<double> ut(window.from, window.to);
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 10; ++i) {
        double a = ut(rng), b = ut(rng);
        if (a > b) std::swap(a, b);
        if (b - a > 4.0) b = a + 4.0;
        pairs.emplace_back(a, b);
    }
    const double residual = residual_check(prob, u, pairs, 256);
    const double solve_ms = ms_since(t_solve);

    const auto t_out = Clock::now();
    std::ostringstream csv;
    csv << "t";
    for (int d = 0; d < family->dim(); ++d) csv << ",u" << d;
    csv << "\n";
    std::vector<Series> series(static_cast<std::size_t>(family->dim()));
    for (int d = 0; d < family->dim(); ++d) series[d].name = "u" + std::to_string(d);
    for (int i = 0; i < grid.count; ++i) {
        const double t = grid.time(i);
        const Vec v = u(t);
        csv << format_double(t);
        for (int d = 0; d < family->dim(); ++d) {
            csv << "," << format_double(v[d]);
            series[d].xs.push_back(t);
            series[d].ys.push_back(v[d]);
        }
        csv << "\n";
    }
    json outputs = json::array();
    const OutputSpec out = parse_output(config, ov);
    if (out.enabled) {
        write_file(out.path, csv.str());
        outputs.push_back(out.path);
        if (out.want_svg) {
            const std::string sp = svg_path_for(out.path);
            write_file(sp, svg_line_chart("semilinear fixed point", series));
            outputs.push_back(sp);
        }
    }

    json report;
    report["schema"] = 1;
    report["kind"] = "semilinear";
    report["scenario"] = config;
    report["certificates"] = {{"kappa", trace.report.kappa},
                              {"threshold", trace.report.threshold},
                              {"admissible", trace.report.admissible},
                              {"bracket_holder", trace.report.bracket_holder},
                              {"bracket_plain", trace.report.bracket_plain},
                              {"iterations", trace.sup_deltas.size()},
                              {"sup_deltas", trace.sup_deltas},
                              {"converged", trace.converged},
                              {"residual", residual},
                              {"n_windows", trace.n_windows_used}};
    report["timings_ms"] = {{"setup", setup_ms}, {"solve", solve_ms}, {"output", ms_since(t_out)}};
    report["outputs"] = outputs;
    return report;
}

// ------------------------------------------------------------------- rd-demo

std::function<Vec(const Vec&)> make_profile_g(const SpatialGrid& grid, double scale,
                                              const json* profile) {
    Vec prof(static_cast<std::size_t>(grid.n()), 0.0);
    if (profile && !profile->is_null()) {
        const std::string kind = (*profile)["kind"].get<std::string>();
        if (kind == "gaussian") {
            check_keys(*profile, {"kind"}, {"amplitude", "center", "sigma"}, "profile gaussian");
            const double amp = get_number_or(*profile, "amplitude", 1.0, "profile");
            const double c = get_number_or(*profile, "center", 0.0, "profile");
            const double s = get_number_or(*profile, "sigma", 1.0, "profile");
            for (int i = 0; i < grid.n(); ++i) {
                const double z = (grid.x(i) - c) / s;
                prof[i] = amp * std::exp(-0.5 * z * z);
            }
        } else if (kind == "zero") {
            check_keys(*profile, {"kind"}, {}, "profile zero");
        } else {
            throw ValidationError("profile: unknown kind '" + kind + "'");
        }
    }
    return [scale, prof](const Vec& phi) {
        Vec out(phi.size());
        for (std::size_t i = 0; i < phi.size(); ++i) out[i] = scale * std::tanh(phi[i]) + prof[i];
        return out;
    };
}

json run_rd_demo(const json& config, const RunOverrides& ov) {
    check_keys(config,
               {"schema", "kind", "grid", "delta", "alpha", "delta_floor", "omega",
                "nonlinearity", "measure", "window"},
               {"stepanov", "lip_norm", "forcing_sup_bound", "control", "tol", "max_iter",
                "oracle", "bi_aa", "output"},
               "rd_demo config");
    const auto t_setup = Clock::now();
    check_keys(config["grid"], {"L", "n"}, {}, "grid");
    SpatialGrid grid(get_number(config["grid"], "L", "grid"),
                     get_int_or(config["grid"], "n", 0, "grid"));
    HeatCoefficients coeffs;
    coeffs.delta_sig = make_signal(config["delta"]);
    coeffs.alpha_sig = make_signal(config["alpha"]);
    coeffs.delta_floor = get_number(config, "delta_floor", "rd_demo");
    coeffs.omega = get_number(config, "omega", "rd_demo");

    check_keys(config["nonlinearity"], {"a", "g_scale"}, {"profile"}, "rd_demo nonlinearity");
    Sec4Nonlinearity nl;
    nl.a_sig = make_signal(config["nonlinearity"]["a"]);
    nl.L_g = get_number(config["nonlinearity"], "g_scale", "nonlinearity");
    const json* profile = config["nonlinearity"].contains("profile")
                              ? &config["nonlinearity"]["profile"]
                              : nullptr;
    nl.g_map = make_profile_g(grid, nl.L_g, profile);

    WeightedMeasure measure = make_measure(config["measure"]);
    const json* stepj = config.contains("stepanov") ? &config["stepanov"] : nullptr;
    StepanovParams params = make_stepanov(stepj);
    SeriesControl ctrl = parse_control(config, ov);
    if (ctrl.tolerance == 0.0) ctrl.tolerance = 1e-6;
    TimeRange window = ov.window ? *ov.window : parse_time_range(config["window"], "window");
    const double tol = ov.tol ? *ov.tol : get_number_or(config, "tol", 1e-6, "rd_demo");
    const int max_iter = get_int_or(config, "max_iter", 30, "rd_demo");

    SemilinearProblem prob = build_sec4_problem(
        grid, coeffs, nl, measure, params,
        get_number_or(config, "lip_norm", 0.0, "rd_demo"),
        get_number_or(config, "forcing_sup_bound", 0.0, "rd_demo"));
    const double setup_ms = ms_since(t_setup);

    const auto t_solve = Clock::now();
    UniformGrid tgrid{window.from, window.to, window.count()};
    TimeSignal u0 = TimeSignal(grid.space(), [n = grid.n()](double) {
        return Vec(static_cast<std::size_t>(n), 0.0);
    });
    IterationTrace trace = picard_iterate(prob, ctrl, tgrid, u0, max_iter, tol, false);
    if (!trace.converged)
        throw ConvergenceError("rd_demo: picard iteration did not reach tolerance",
                               trace.sup_deltas.empty() ? 0.0 : trace.sup_deltas.back());
    const TimeSignal& u = trace.iterates.back();
    const double solve_ms = ms_since(t_solve);

    // independent method-of-lines oracle, burned in from the far past
    const auto t_oracle = Clock::now();
    double oracle_dt = 0.005;
    double burn = 10.0 / coeffs.omega;
    if (config.contains("oracle")) {
        check_keys(config["oracle"], {}, {"dt", "burn"}, "oracle");
        oracle_dt = get_number_or(config["oracle"], "dt", oracle_dt, "oracle");
        burn = get_number_or(config["oracle"], "burn", burn, "oracle");
    }
    TimeSignal u_fd = fd_oracle(grid, coeffs, nl, window.from - burn, window.from, window.to,
                                oracle_dt);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < tgrid.count; ++i) {
        const double t = tgrid.time(i);
        const Vec a = u(t), b = u_fd(t);
        const double d = grid.space().distance(a, b);
        const double n0 = grid.space().norm(a);
        num += d * d;
        den += n0 * n0;
    }
    const double rel_l2 = den > 0.0 ? std::sqrt(num / den) : 0.0;
    const double oracle_ms = ms_since(t_oracle);

    // bi-almost-automorphy defect of the family at a searched near-period
    const auto t_biaa = Clock::now();
    long q_max = 1000;
    int biaa_samples = 20;
    unsigned biaa_seed = 777u;
    double biaa_span = 3.0;
    std::vector<double> ratios{1.0};
    if (config.contains("bi_aa")) {
        check_keys(config["bi_aa"], {}, {"q_max", "samples", "seed", "span", "ratios"}, "bi_aa");
        q_max = get_int_or(config["bi_aa"], "q_max", 1000, "bi_aa");
        biaa_samples = get_int_or(config["bi_aa"], "samples", 20, "bi_aa");
        biaa_seed = static_cast<unsigned>(get_int_or(config["bi_aa"], "seed", 777, "bi_aa"));
        biaa_span = get_number_or(config["bi_aa"], "span", 3.0, "bi_aa");
        if (config["bi_aa"].contains("ratios")) {
            ratios.clear();
            for (const json& r : config["bi_aa"]["ratios"]) ratios.push_back(r.get<double>());
        }
    }
    long q = 0;
    const double tau = find_near_period(ratios, q_max, 2.0 * std::numbers::pi, &q);
    std::mt19937 rng(biaa_seed);
    std::uniform_real_distribution<double> utime(-10.0, 10.0);
    std::uniform_real_distribution<double> uspan(0.2, biaa_span);
    std::uniform_real_distribution<double> ubump(-1.0, 1.0);
    std::vector<std::tuple<double, double, Vec>> samples;
    for (int k = 0; k < biaa_samples; ++k) {
        const double s = utime(rng);
        const double t = s + uspan(rng);
        Vec phi(static_cast<std::size_t>(grid.n()), 0.0);
        for (int b = 0; b < 3; ++b) {
            const double c = 5.0 * ubump(rng);
            const double w = 0.5 + 0.75 * (ubump(rng) + 1.0);
            const double a = ubump(rng);
            for (int i = 0; i < grid.n(); ++i) {
                const double z = (grid.x(i) - c) / w;
                phi[i] += a * std::exp(-0.5 * z * z);
            }
        }
        samples.emplace_back(t, s, std::move(phi));
    }
    const double biaa_defect = bi_aa_family_defect(prob.green.family(), tau, samples);
    const double biaa_ms = ms_since(t_biaa);

    const auto t_out = Clock::now();
    std::ostringstream csv;
    csv << "t,x,u_picard,u_fd\n";
    for (int i = 0; i < tgrid.count; ++i) {
        const double t = tgrid.time(i);
        const Vec a = u(t), b = u_fd(t);
        for (int jx = 0; jx < grid.n(); ++jx)
            csv << format_double(t) << "," << format_double(grid.x(jx)) << ","
                << format_double(a[jx]) << "," << format_double(b[jx]) << "\n";
    }
    json outputs = json::array();
    const OutputSpec out = parse_output(config, ov);
    if (out.enabled) {
        write_file(out.path, csv.str());
        outputs.push_back(out.path);
        if (out.want_svg) {
            std::vector<Series> series;
            for (int i : {0, tgrid.count / 2, tgrid.count - 1}) {
                const double t = tgrid.time(i);
                Series s;
                s.name = "u(t=" + format_double(t) + ")";
                const Vec v = u(t);
                for (int jx = 0; jx < grid.n(); ++jx) {
                    s.xs.push_back(grid.x(jx));
                    s.ys.push_back(v[jx]);
                }
                series.push_back(std::move(s));
            }
            const std::string sp = svg_path_for(out.path);
            write_file(sp, svg_line_chart("reaction-diffusion demo slices", series));
            outputs.push_back(sp);
        }
    }

    json report;
    report["schema"] = 1;
    report["kind"] = "rd_demo";
    report["scenario"] = config;
    report["certificates"] = {{"kappa", trace.report.kappa},
                              {"threshold", trace.report.threshold},
                              {"admissible", trace.report.admissible},
                              {"lip_norm", prob.lip_norm},
                              {"iterations", trace.sup_deltas.size()},
                              {"sup_deltas", trace.sup_deltas},
                              {"converged", trace.converged},
                              {"n_windows", trace.n_windows_used},
                              {"oracle_rel_l2_error", rel_l2},
                              {"bi_aa", {{"tau", tau}, {"q", q}, {"defect", biaa_defect}}}};
    report["timings_ms"] = {{"setup", setup_ms},
                            {"solve", solve_ms},
                            {"oracle", oracle_ms},
                            {"bi_aa", biaa_ms},
                            {"output", ms_since(t_out)}};
    report["outputs"] = outputs;
    return report;
}

// --------------------------------------------------------------- diagnostics

json run_diagnostics(const json& config, const RunOverrides& ov) {
    check_keys(config, {"schema", "kind", "op"},
               {"signal", "measure", "family", "stepanov", "t_range", "grid_step", "r_values",
                "windowed", "tau", "tau_search", "trials", "max_span", "amplitude", "tolerance",
                "output", "seed"},
               "diagnostics config");
    const std::string op = config["op"].get<std::string>();
    const json* stepj = config.contains("stepanov") ? &config["stepanov"] : nullptr;
    StepanovParams params = make_stepanov(stepj);
    const auto t_start = Clock::now();

    json certificates;
    std::ostringstream csv;

    if (op == "stepanov-norm") {
        TimeSignal f = make_signal(config.at("signal"));
        check_keys(config.at("t_range"), {"lo", "hi"}, {}, "t_range");
        Interval range{get_number(config["t_range"], "lo", "t_range"),
                       get_number(config["t_range"], "hi", "t_range")};
        const double step = get_number_or(config, "grid_step", 0.05, "diagnostics");
        csv << "window_start,window_p_mean\n";
        double best = 0.0;
        for (double t = range.lo; t <= range.hi + 0.5 * step; t += step) {
            const double v = window_p_mean(f, t, params);
            best = std::max(best, v);
            csv << format_double(t) << "," << format_double(v) << "\n";
        }
        certificates["stepanov_norm"] = best;
    } else if (op == "ergodic-mean") {
        TimeSignal f = make_signal(config.at("signal"));
        WeightedMeasure mu = make_measure(config.at("measure"));
        const double step = get_number_or(config, "grid_step", 0.01, "diagnostics");
        const bool windowed = get_bool_or(config, "windowed", false, "diagnostics");
        std::vector<double> rs{10.0, 100.0, 1000.0};
        if (config.contains("r_values")) {
            rs.clear();
            for (const json& r : config["r_values"]) rs.push_back(r.get<double>());
        }
        csv << "r,mean\n";
        json means = json::array();
        for (double r : rs) {
            const double m = windowed ? stepanov_ergodic_mean(f, mu, params, r, step)
                                      : ergodic_mean(f, mu, r, step);
            means.push_back({{"r", r}, {"mean", m}});
            csv << format_double(r) << "," << format_double(m) << "\n";
        }
        certificates["means"] = means;
    } else if (op == "shift-defect") {
        TimeSignal f = make_signal(config.at("signal"));
        check_keys(config.at("t_range"), {"lo", "hi"}, {}, "t_range");
        Interval range{get_number(config["t_range"], "lo", "t_range"),
                       get_number(config["t_range"], "hi", "t_range")};
        const double step = get_number_or(config, "grid_step", 0.05, "diagnostics");
        double tau = 0.0;
        long q = 0;
        if (config.contains("tau_search")) {
            check_keys(config["tau_search"], {"ratios"}, {"q_max", "base"}, "tau_search");
            std::vector<double> ratios;
            for (const json& r : config["tau_search"]["ratios"]) ratios.push_back(r.get<double>());
            const long q_max = get_int_or(config["tau_search"], "q_max", 20000, "tau_search");
            const double base =
                get_number_or(config["tau_search"], "base", 2.0 * std::numbers::pi, "tau_search");
            tau = find_near_period(ratios, q_max, base, &q);
        } else {
            tau = get_number(config, "tau", "diagnostics shift-defect");
        }
        const double defect = shift_defect(f, tau, params, range, step);
        csv << "tau,q,defect\n"
            << format_double(tau) << "," << q << "," << format_double(defect) << "\n";
        certificates["tau"] = tau;
        certificates["q"] = q;
        certificates["defect"] = defect;
    } else if (op == "dichotomy-check") {
        auto family = make_family(config.at("family"));
        const int trials = get_int_or(config, "trials", 1000, "diagnostics");
        const unsigned seed =
            ov.seed ? *ov.seed : static_cast<unsigned>(get_int_or(config, "seed", 314159, "diagnostics"));
        const double span = get_number_or(config, "max_span", 10.0, "diagnostics");
        const double amp = get_number_or(config, "amplitude", 1.0, "diagnostics");
        const double tolerance = get_number_or(config, "tolerance", 1e-8, "diagnostics");
        const AxiomCheckResult r = check_dichotomy_axioms(*family, trials, seed, span, amp);
        csv << "axiom,defect\n"
            << "cocycle," << format_double(r.cocycle) << "\n"
            << "identity," << format_double(r.identity) << "\n"
            << "commutation," << format_double(r.commutation) << "\n"
            << "idempotence," << format_double(r.idempotence) << "\n"
            << "inverse," << format_double(r.inverse) << "\n"
            << "decay_excess," << format_double(r.decay_excess) << "\n"
            << "green_excess," << format_double(r.green_excess) << "\n";
        certificates = {{"cocycle", r.cocycle},       {"identity", r.identity},
                        {"commutation", r.commutation}, {"idempotence", r.idempotence},
                        {"inverse", r.inverse},       {"decay_excess", r.decay_excess},
                        {"green_excess", r.green_excess}, {"trials", r.trials}};
        const double worst = std::max({r.cocycle, r.identity, r.commutation, r.idempotence,
                                       r.inverse, r.decay_excess, r.green_excess});
        certificates["worst_defect"] = worst;
        certificates["tolerance"] = tolerance;
        if (worst > tolerance) {
            std::ostringstream os;
            os << "dichotomy-check: axiom defect " << worst << " exceeds tolerance " << tolerance;
            throw HypothesisError(os.str());
        }
    } else {
        throw ValidationError("diagnostics: unknown op '" + op + "'");
    }

    json outputs = json::array();
    const OutputSpec out = parse_output(config, ov);
    if (out.enabled) {
        write_file(out.path, csv.str());
        outputs.push_back(out.path);
    }
    json report;
    report["schema"] = 1;
    report["kind"] = "diagnostics";
    report["op"] = op;
    report["scenario"] = config;
    report["certificates"] = certificates;
    report["timings_ms"] = {{"total", ms_since(t_start)}};
    report["outputs"] = outputs;
    return report;
}

}  // namespace

json run_scenario(const json& config, const RunOverrides& overrides) {
    require_schema(config);
    if (!config.contains("kind")) throw ValidationError("config: missing 'kind'");
    const std::string kind = config["kind"].get<std::string>();
    if (kind == "linear") return run_linear(config, overrides);
    if (kind == "semilinear") return run_semilinear(config, overrides);
    if (kind == "rd_demo") return run_rd_demo(config, overrides);
    if (kind == "diagnostics") return run_diagnostics(config, overrides);
    throw ValidationError("config: unknown kind '" + kind + "'");
}

}  // namespace evo::cli
