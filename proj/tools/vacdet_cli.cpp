// vacdet command-line front-end: steady-state evaluation, oracle validation,
// parameter sweeps, and correlation traces.
//
// Exit codes: 0 ok, 2 config error, 3 validation tolerance failure,
// 4 calibration/propagation failure.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "vacdet/vacdet.hpp"

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ToleranceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LoadedConfig {
    vacdet::SystemSpec spec;
    vacdet::OracleSettings oracle;
    std::optional<vacdet::CavityConfig> cavity;
};

LoadedConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    LoadedConfig cfg;
    try {
        cfg.spec = j.get<vacdet::SystemSpec>();
        if (j.contains("oracle")) {
            const auto& o = j.at("oracle");
            cfg.oracle.mode_count_override = o.value("mode_count", std::size_t{0});
            cfg.oracle.bandwidth_override = o.value("bandwidth", 0.0);
            cfg.oracle.dt = o.value("dt", 0.0);
            cfg.oracle.horizon = o.value("horizon", 0.0);
        }
        if (j.contains("cavity")) {
            const auto& c = j.at("cavity");
            vacdet::CavityConfig cav;
            cav.g_ke = c.at("g_ke").get<double>();
            cav.kappa = c.value("kappa", 1.0);
            cav.gamma_1 = c.value("gamma_1", cfg.spec.electronic.gamma);
            cav.other_loss_ratios = c.value("other_loss_ratios", std::vector<double>{});
            cfg.cavity = cav;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    const auto report = vacdet::validate(cfg.spec);
    if (!report.ok()) {
        std::string msg = "config validation failed:";
        for (const auto& v : report.violations) msg += "\n  - " + v;
        throw ConfigError(msg);
    }
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    return cfg;
}

std::vector<double> default_grid(const vacdet::SystemSpec& spec,
                                 const vacdet::OracleSettings& settings) {
    const double horizon =
        settings.horizon > 0.0 ? settings.horizon : 20.0 / spec.gamma_total();
    const double dt = settings.dt > 0.0 ? settings.dt : horizon / 800.0;
    std::vector<double> grid;
    for (double t = 0.0; t < horizon + dt / 2.0; t += dt) grid.push_back(std::min(t, horizon));
    return grid;
}

vacdet::RunResult run_analytic(const vacdet::SystemSpec& spec,
                               const vacdet::OracleSettings& settings) {
    vacdet::RunResult r;
    r.spec_echo = spec;
    r.provenance = vacdet::Provenance::Analytic;
    r.time_grid = default_grid(spec, settings);
    for (double t : r.time_grid)
        r.mean_current_trace.push_back(vacdet::mean_current_transient(spec, t));
    r.steady = vacdet::mean_current_steady(spec);
    r.xi = spec.xi();
    r.variance = vacdet::current_variance(spec);
    const auto report = vacdet::validate(spec);
    r.diagnostics.warnings = report.warnings;
    return r;
}

vacdet::RunResult run_oracle(const vacdet::SystemSpec& spec,
                             const vacdet::OracleSettings& settings) {
    const auto sys = vacdet::build_discretized(spec, settings);
    const auto tm = vacdet::propagate(sys);
    vacdet::require_unitary(tm);
    vacdet::RunResult r;
    r.spec_echo = sys.spec;
    r.provenance = vacdet::Provenance::Oracle;
    r.time_grid = tm.time_grid();
    const auto trace = vacdet::oracle_mean_current_trace(tm, r.time_grid);
    r.mean_current_trace = trace.normalized;
    r.steady = vacdet::mean_current_steady(sys.spec); // analytic reference fields
    r.steady.mean_current = trace.steady;             // measured value
    r.xi = sys.spec.xi();
    const auto var = vacdet::oracle_variance(tm, 0.75 * sys.horizon);
    r.variance.variance = var.variance;
    r.variance.fano_ratio = var.ratio;
    r.variance.shot_noise_approx =
        sys.spec.electronic.bandwidth / vacdet::pi_const * var.mean;
    r.diagnostics.calibration_electronic = sys.calibration_electronic;
    r.diagnostics.calibration_radiative = sys.calibration_radiative;
    r.diagnostics.unitarity_defect = tm.unitarity_defect();
    r.diagnostics.drive_decay = trace.drive_decay;
    const double dw = 2.0 * sys.spec.electronic.bandwidth /
                      static_cast<double>(sys.spec.electronic.mode_count - 1);
    r.diagnostics.modes_per_linewidth = sys.spec.gamma_total() / dw;
    r.diagnostics.recurrence_margin = (2.0 * vacdet::pi_const / dw) / sys.horizon;
    return r;
}

void emit_result(const vacdet::RunResult& r, const std::string& out, std::string format) {
    if (format.empty()) format = "json";
    const std::string body = format == "csv"
                                 ? vacdet::result_to_csv(r)
                                 : vacdet::result_to_json(r).dump(2) + "\n";
    if (out.empty())
        std::cout << body;
    else
        vacdet::write_text(out, body);
}

void emit_table(const vacdet::SweepTable& t, const std::string& out, std::string format) {
    if (format.empty()) format = "csv";
    const std::string body = format == "json" ? vacdet::sweep_to_json(t).dump(2) + "\n"
                                              : vacdet::sweep_to_csv(t);
    if (out.empty())
        std::cout << body;
    else
        vacdet::write_text(out, body);
}

// index-ordered concurrent map over grid points
template <typename Fn>
void parallel_rows(std::size_t n, unsigned jobs, Fn&& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<unsigned>(jobs, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

struct ValidationRow {
    std::string name;
    double value, target, tolerance;
    bool pass;
};

int cmd_validate(const LoadedConfig& cfg, std::size_t modes, double bandwidth,
                 const std::string& out) {
    vacdet::OracleSettings settings = cfg.oracle;
    if (modes) settings.mode_count_override = modes;
    if (bandwidth > 0.0) settings.bandwidth_override = bandwidth;
    vacdet::SystemSpec spec = cfg.spec;
    if (settings.mode_count_override) {
        spec.electronic.mode_count = settings.mode_count_override;
        spec.radiative.mode_count = settings.mode_count_override;
    }
    if (settings.bandwidth_override > 0.0) {
        spec.electronic.bandwidth = settings.bandwidth_override;
        spec.radiative.bandwidth = settings.bandwidth_override;
    }
    const double ge = spec.gamma_total();
    const double horizon = settings.horizon > 0.0 ? settings.horizon : 20.0 / ge;
    const double dw =
        2.0 * spec.electronic.bandwidth / static_cast<double>(spec.electronic.mode_count - 1);

    std::vector<ValidationRow> rows;
    // discretization guards: enough modes per linewidth, no recurrence inside
    // the horizon
    rows.push_back({"modes_per_linewidth", ge / dw, 5.0, 0.0, ge / dw >= 5.0});
    const double margin = (2.0 * vacdet::pi_const / dw) / horizon;
    rows.push_back({"recurrence_margin", margin, 1.2, 0.0, margin >= 1.2});

    if (rows[0].pass && rows[1].pass) {
        const auto sys = vacdet::build_discretized(spec, settings);
        const auto tm = vacdet::propagate(sys);
        vacdet::require_unitary(tm);
        rows.push_back({"unitarity_defect", tm.unitarity_defect(), 1e-9, 0.0,
                        tm.unitarity_defect() <= 1e-9});

        const double steady = vacdet::oracle_steady_current(tm);
        const double steady_target = vacdet::mean_current_steady(sys.spec).mean_current;
        rows.push_back({"mean_current", steady, steady_target, 0.02,
                        std::abs(steady / steady_target - 1.0) <= 0.02});

        const auto var = vacdet::oracle_variance(tm, 0.75 * sys.horizon);
        const double ratio_target =
            sys.spec.electronic.bandwidth / vacdet::pi_const + sys.spec.electronic.gamma / 2.0;
        rows.push_back({"variance_ratio", var.ratio, ratio_target, 0.05,
                        std::abs(var.ratio / ratio_target - 1.0) <= 0.05});

        std::vector<double> taus;
        for (int k = 0; k <= 70; ++k) taus.push_back((0.5 + 3.5 * k / 70.0) / ge);
        const auto scan = vacdet::oracle_correlation_trace(tm, 10.0 / ge, taus);
        double sw = 0, st = 0, sy = 0, stt = 0, sty = 0;
        for (std::size_t k = 0; k < taus.size(); ++k) {
            const double v = std::abs(scan.normalized_smooth[k]);
            const double w = v * v; // amplitude-weighted exponential fit
            const double y = std::log(std::max(v, 1e-300));
            sw += w;
            st += w * taus[k];
            sy += w * y;
            stt += w * taus[k] * taus[k];
            sty += w * taus[k] * y;
        }
        const double rate = -(sw * sty - st * sy) / (sw * stt - st * st);
        rows.push_back(
            {"correlation_decay", rate, ge, 0.05, std::abs(rate / ge - 1.0) <= 0.05});
    }

    vacdet::SweepTable table;
    table.columns = {"value", "target", "tolerance", "pass"};
    bool all_pass = true;
    std::printf("%-22s %14s %14s %8s  %s\n", "check", "value", "target", "tol", "status");
    for (const auto& row : rows) {
        std::printf("%-22s %14.6g %14.6g %8.3g  %s\n", row.name.c_str(), row.value, row.target,
                    row.tolerance, row.pass ? "PASS" : "FAIL");
        table.rows.push_back({row.value, row.target, row.tolerance, row.pass ? 1.0 : 0.0});
        all_pass = all_pass && row.pass;
    }
    if (!out.empty()) {
        std::string csv = "check,value,target,tolerance,pass\n";
        for (const auto& row : rows)
            csv += row.name + "," + vacdet::detail::fmt(row.value) + "," +
                   vacdet::detail::fmt(row.target) + "," + vacdet::detail::fmt(row.tolerance) +
                   "," + (row.pass ? "1" : "0") + "\n";
        vacdet::write_text(out, csv);
    }
    if (!all_pass) throw ToleranceFailure("validation failed");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vacuum-mode photodetection calculator"};
    app.require_subcommand(1);

    std::string config_path, out_path, format;
    bool use_oracle = false;
    unsigned jobs = 1;
    long seed = 0; // reserved: the model is deterministic
    app.add_option("--config", config_path, "JSON config file")->required();
    app.add_option("--out", out_path, "output file (stdout if omitted)");
    app.add_option("--format", format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json", ""}));
    app.add_flag("--oracle", use_oracle, "add discretized-reservoir oracle columns");
    app.add_option("--jobs", jobs, "concurrent sweep evaluations");
    app.add_option("--seed", seed, "reserved, currently unused");

    auto* c_steady = app.add_subcommand("steady", "steady-state summary and current trace");
    auto* c_validate = app.add_subcommand("validate", "oracle-vs-analytic validation");
    std::size_t v_modes = 0;
    double v_bandwidth = 0.0;
    c_validate->add_option("--modes", v_modes, "modes per reservoir (override)");
    c_validate->add_option("--bandwidth", v_bandwidth, "reservoir half-bandwidth (override)");
    auto* c_sweep = app.add_subcommand("sweep", "parameter sweep table");
    std::string axis, grid_arg;
    c_sweep->add_option("--axis", axis, "detuning, xi, kappa, or alpha")->required();
    c_sweep->add_option("--grid", grid_arg, "comma-separated grid values")->required();
    auto* c_correlate = app.add_subcommand("correlate", "stationary two-time correlation");
    double tau_max = -1.0;
    std::size_t points = 200;
    c_correlate->add_option("--tau-max", tau_max, "maximum lag (default 4/gamma_eps)");
    c_correlate->add_option("--points", points, "number of lag points");
    // allow global options (--jobs, --oracle, ...) after the subcommand name
    for (auto* sub : {c_steady, c_validate, c_sweep, c_correlate}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        const LoadedConfig cfg = load_config(config_path);

        if (*c_steady) {
            const auto r = use_oracle ? run_oracle(cfg.spec, cfg.oracle)
                                      : run_analytic(cfg.spec, cfg.oracle);
            std::printf("steady_current = %.10g\n", r.steady.mean_current);
            std::printf("efficiency_factor = %.10g\n", r.steady.efficiency_factor);
            std::printf("xi = %.10g\n", r.xi);
            emit_result(r, out_path, format);
            return 0;
        }
        if (*c_validate) return cmd_validate(cfg, v_modes, v_bandwidth, out_path);
        if (*c_sweep) {
            std::vector<double> grid;
            {
                std::stringstream ss(grid_arg);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    try {
                        std::size_t pos = 0;
                        const double v = std::stod(item, &pos);
                        if (pos != item.size()) throw std::invalid_argument(item);
                        grid.push_back(v);
                    } catch (const std::exception&) {
                        throw ConfigError("bad grid value: " + item);
                    }
                }
                if (grid.empty()) throw ConfigError("empty sweep grid");
            }
            vacdet::SweepTable table;
            if (axis == "kappa") {
                if (!cfg.cavity)
                    throw ConfigError("kappa sweep requires a \"cavity\" config section");
                table.columns = {"kappa", "xi", "efficiency", "shot_noise_ratio"};
                for (const auto& row : vacdet::efficiency_vs_kappa(
                         *cfg.cavity, grid, cfg.spec.electronic.bandwidth))
                    table.rows.push_back(
                        {row.kappa, row.xi, row.efficiency, row.shot_noise_ratio});
            } else if (axis == "detuning" || axis == "xi" || axis == "alpha") {
                table.columns = {axis, "mean_current", "efficiency", "variance", "fano_ratio"};
                if (use_oracle) table.columns.push_back("oracle_mean_current");
                table.rows.resize(grid.size());
                parallel_rows(grid.size(), jobs, [&](std::size_t i) {
                    vacdet::SystemSpec spec = cfg.spec;
                    if (axis == "detuning")
                        spec.drive.laser_frequency =
                            spec.detector.transition_frequency + grid[i];
                    else if (axis == "xi")
                        spec.radiative.gamma = grid[i] * spec.electronic.gamma;
                    else
                        spec.drive.alpha = grid[i];
                    const auto report = vacdet::validate(spec);
                    if (!report.ok())
                        throw ConfigError("sweep point " + vacdet::detail::fmt(grid[i]) +
                                          " invalid: " + report.violations.front());
                    const auto steady = vacdet::mean_current_steady(spec);
                    const auto var = vacdet::current_variance(spec);
                    std::vector<double> row{grid[i], steady.mean_current,
                                            steady.efficiency_factor, var.variance,
                                            var.fano_ratio};
                    if (use_oracle) {
                        const auto sys = vacdet::build_discretized(spec, cfg.oracle);
                        const auto tm = vacdet::propagate(sys);
                        vacdet::require_unitary(tm);
                        row.push_back(vacdet::oracle_steady_current(tm));
                    }
                    table.rows[i] = std::move(row);
                });
            } else {
                throw ConfigError("unknown sweep axis: " + axis);
            }
            emit_table(table, out_path, format);
            return 0;
        }
        if (*c_correlate) {
            const double ge = cfg.spec.gamma_total();
            const double horizon = tau_max < 0.0 ? 4.0 / ge : tau_max;
            if (horizon <= 0.0) throw ConfigError("tau_max must be positive");
            if (points < 2) throw ConfigError("points must be at least 2");
            std::vector<double> taus;
            for (std::size_t k = 0; k < points; ++k)
                taus.push_back(horizon * static_cast<double>(k) /
                               static_cast<double>(points - 1));
            const auto analytic = vacdet::correlation_stationary(cfg.spec, taus);
            vacdet::SweepTable table;
            table.columns = {"tau", "real", "imag", "abs"};
            if (use_oracle) {
                table.columns.insert(table.columns.end(),
                                     {"oracle_real", "oracle_imag", "oracle_abs",
                                      "oracle_smooth_real", "oracle_smooth_imag"});
            }
            std::optional<vacdet::CorrelationScan> scan;
            if (use_oracle) {
                const auto sys = vacdet::build_discretized(cfg.spec, cfg.oracle);
                const auto tm = vacdet::propagate(sys);
                vacdet::require_unitary(tm);
                scan = vacdet::oracle_correlation_trace(tm, 10.0 / ge, taus);
            }
            for (std::size_t k = 0; k < taus.size(); ++k) {
                const auto v = analytic.values[k];
                std::vector<double> row{taus[k], v.real(), v.imag(), std::abs(v)};
                if (scan) {
                    const auto o = scan->normalized[k];
                    const auto s = scan->normalized_smooth[k];
                    row.insert(row.end(),
                               {o.real(), o.imag(), std::abs(o), s.real(), s.imag()});
                }
                table.rows.push_back(std::move(row));
            }
            emit_table(table, out_path, format);
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ToleranceFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const vacdet::CalibrationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
