// result.hpp — run-result schema and deterministic CSV/JSON emission.
//
// Identical config + flags must produce byte-identical output, so all numbers
// go through one fixed formatter and JSON field order is fixed (ordered_json).

#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vacdet/analytic.hpp"
#include "vacdet/model.hpp"

namespace vacdet {

inline constexpr int schema_version = 1;

enum class Provenance { Analytic, Oracle };

inline std::string to_string(Provenance p) {
    return p == Provenance::Analytic ? "analytic" : "oracle";
}

struct CorrelationResult {
    std::vector<double> tau_grid;
    std::vector<complex> values;
    std::vector<complex> smooth_values;
};

struct Diagnostics {
    std::optional<CalibrationFit> calibration_electronic;
    std::optional<CalibrationFit> calibration_radiative;
    std::optional<double> unitarity_defect;
    std::optional<double> drive_decay;
    std::optional<double> modes_per_linewidth; // gamma_eps / dw, coarseness guard
    std::optional<double> recurrence_margin;   // recurrence time / horizon
    std::vector<std::string> warnings;
};

struct RunResult {
    SystemSpec spec_echo;
    Provenance provenance{Provenance::Analytic};
    std::vector<double> time_grid;
    std::vector<double> mean_current_trace;
    SteadyStateSummary steady;
    double xi{0.0};
    VarianceSummary variance;
    std::optional<CorrelationResult> correlation;
    Diagnostics diagnostics;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace detail

inline void to_json(nlohmann::ordered_json& j, const CalibrationFit& c) {
    j = {{"requested_gamma", c.requested_gamma},
         {"fitted_gamma", c.fitted_gamma},
         {"coupling_scale", c.coupling_scale},
         {"iterations", c.iterations},
         {"within_tolerance", c.within_tolerance}};
}

inline nlohmann::ordered_json result_to_json(const RunResult& r) {
    nlohmann::ordered_json j;
    j["schema_version"] = schema_version;
    j["provenance"] = to_string(r.provenance);
    {
        nlohmann::json spec_j = r.spec_echo; // model.hpp serializers
        j["spec_echo"] = nlohmann::ordered_json(spec_j);
    }
    j["time_grid"] = r.time_grid;
    j["mean_current_trace"] = r.mean_current_trace;
    j["steady"] = {{"mean_current", r.steady.mean_current},
                   {"efficiency_factor", r.steady.efficiency_factor},
                   {"normally_ordered_current", r.steady.normally_ordered_current},
                   {"detuning", r.steady.detuning},
                   {"xi", r.xi}};
    j["variance"] = {{"variance", r.variance.variance},
                     {"shot_noise_approx", r.variance.shot_noise_approx},
                     {"fano_ratio", r.variance.fano_ratio}};
    if (r.correlation) {
        nlohmann::ordered_json c;
        c["tau_grid"] = r.correlation->tau_grid;
        std::vector<double> re, im, sre, sim;
        for (const auto& v : r.correlation->values) {
            re.push_back(v.real());
            im.push_back(v.imag());
        }
        for (const auto& v : r.correlation->smooth_values) {
            sre.push_back(v.real());
            sim.push_back(v.imag());
        }
        c["real"] = re;
        c["imag"] = im;
        c["smooth_real"] = sre;
        c["smooth_imag"] = sim;
        j["correlation"] = c;
    }
    nlohmann::ordered_json d;
    if (r.diagnostics.calibration_electronic)
        to_json(d["calibration_electronic"], *r.diagnostics.calibration_electronic);
    if (r.diagnostics.calibration_radiative)
        to_json(d["calibration_radiative"], *r.diagnostics.calibration_radiative);
    if (r.diagnostics.unitarity_defect) d["unitarity_defect"] = *r.diagnostics.unitarity_defect;
    if (r.diagnostics.drive_decay) d["drive_decay"] = *r.diagnostics.drive_decay;
    if (r.diagnostics.modes_per_linewidth)
        d["modes_per_linewidth"] = *r.diagnostics.modes_per_linewidth;
    if (r.diagnostics.recurrence_margin) d["recurrence_margin"] = *r.diagnostics.recurrence_margin;
    if (!r.diagnostics.warnings.empty()) d["warnings"] = r.diagnostics.warnings;
    j["diagnostics"] = d;
    return j;
}

// CSV: fixed header "t,mean_current" plus optional correlation block appended
// as its own table (header "tau,real,imag,abs,smooth_real,smooth_imag").
inline std::string result_to_csv(const RunResult& r) {
    std::string out = "t,mean_current\n";
    for (std::size_t k = 0; k < r.time_grid.size(); ++k)
        out += detail::fmt(r.time_grid[k]) + "," + detail::fmt(r.mean_current_trace[k]) + "\n";
    if (r.correlation) {
        out += "tau,real,imag,abs,smooth_real,smooth_imag\n";
        for (std::size_t k = 0; k < r.correlation->tau_grid.size(); ++k) {
            const auto v = r.correlation->values[k];
            const auto s = r.correlation->smooth_values[k];
            out += detail::fmt(r.correlation->tau_grid[k]) + "," + detail::fmt(v.real()) + "," +
                   detail::fmt(v.imag()) + "," + detail::fmt(std::abs(v)) + "," +
                   detail::fmt(s.real()) + "," + detail::fmt(s.imag()) + "\n";
        }
    }
    return out;
}

// Generic sweep table: fixed column names, one row per grid point.
struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

inline std::string sweep_to_csv(const SweepTable& t) {
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        out += (c ? "," : "") + t.columns[c];
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + detail::fmt(row[c]);
        out += "\n";
    }
    return out;
}

inline nlohmann::ordered_json sweep_to_json(const SweepTable& t) {
    nlohmann::ordered_json j;
    j["schema_version"] = schema_version;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    return j;
}

inline void write_text(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << body;
}

} // namespace vacdet
