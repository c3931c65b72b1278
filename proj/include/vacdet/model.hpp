// model.hpp — physical parameter types shared by every other module
//
// All quantities are expressed in units of a user-chosen rate scale
// (gamma_1 = 1 by convention); only rate ratios and detunings matter.

#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace vacdet {

using complex = std::complex<double>;

// Omega/gamma below this, the Markov closed forms are not trusted.
inline constexpr double markov_ratio_min = 10.0;
// g_L|alpha|/(gamma_1+gamma_2) above this, the weak-excitation
// (harmonic oscillator) replacement is suspect.
inline constexpr double weak_excitation_max = 0.1;

struct DetectorSpec {
    double transition_frequency{100.0}; // w_eps, ground state energy fixed at zero
};

enum class ReservoirKind { Electronic, Radiative };

inline std::string to_string(ReservoirKind k) {
    return k == ReservoirKind::Electronic ? "electronic" : "radiative";
}

struct ReservoirSpec {
    ReservoirKind kind{ReservoirKind::Electronic};
    double gamma{1.0};             // amplitude damping rate into this channel
    double center_frequency{100.0};
    double bandwidth{40.0};        // Omega, half-width of the mode band
    std::size_t mode_count{2001};  // oracle discretization only; odd so the
                                   // grid contains the center exactly

    bool markovian() const { return gamma <= 0.0 || bandwidth / gamma >= markov_ratio_min; }
};

struct DriveSpec {
    complex alpha{1.0, 0.0};     // coherent amplitude of the laser mode
    double laser_frequency{100.0};
    double coupling{0.1};        // g_L
};

struct SystemSpec {
    DetectorSpec detector;
    ReservoirSpec electronic{ReservoirKind::Electronic};
    ReservoirSpec radiative{ReservoirKind::Radiative, 0.5};
    DriveSpec drive;

    // gamma_eps = gamma_1 + gamma_2
    double gamma_total() const { return electronic.gamma + radiative.gamma; }
    // branching ratio xi = gamma_2/gamma_1
    double xi() const { return radiative.gamma / electronic.gamma; }
    // w_L - w_eps
    double detuning() const { return drive.laser_frequency - detector.transition_frequency; }

    double weak_excitation_ratio() const {
        return drive.coupling * std::abs(drive.alpha) / gamma_total();
    }
};

struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    bool ok() const { return violations.empty(); }
};

namespace detail {

inline void validate_reservoir(const ReservoirSpec& r, bool gamma_may_vanish,
                               ValidationReport& rep) {
    const std::string name = to_string(r.kind);
    if (gamma_may_vanish ? r.gamma < 0.0 : r.gamma <= 0.0)
        rep.violations.push_back(name + ": gamma must be " +
                                 (gamma_may_vanish ? "non-negative" : "positive"));
    if (r.bandwidth <= 0.0)
        rep.violations.push_back(name + ": bandwidth must be positive");
    if (r.mode_count < 3 || r.mode_count % 2 == 0)
        rep.violations.push_back(name + ": mode_count must be odd and >= 3");
    if (r.gamma > 0.0 && !r.markovian())
        rep.warnings.push_back(name + ": non-Markovian: Omega/gamma = " +
                               std::to_string(r.bandwidth / r.gamma) + " < 10");
}

} // namespace detail

// Report-returning, never throws. Pure: same spec, same report.
inline ValidationReport validate(const SystemSpec& spec) {
    ValidationReport rep;
    if (spec.detector.transition_frequency <= 0.0)
        rep.violations.push_back("detector: transition_frequency must be positive");
    // The radiative channel may be switched off entirely (gamma_2 = 0); the
    // electronic channel carries the current and must damp.
    detail::validate_reservoir(spec.electronic, false, rep);
    detail::validate_reservoir(spec.radiative, true, rep);
    if (spec.electronic.kind != ReservoirKind::Electronic)
        rep.violations.push_back("electronic reservoir has wrong kind tag");
    if (spec.radiative.kind != ReservoirKind::Radiative)
        rep.violations.push_back("radiative reservoir has wrong kind tag");
    if (std::abs(spec.drive.alpha) < 0.0 || spec.drive.coupling < 0.0)
        rep.violations.push_back("drive: |alpha| and coupling must be non-negative");
    if (spec.gamma_total() <= 0.0) {
        rep.violations.push_back("gamma_1 + gamma_2 must be positive");
    } else if (spec.weak_excitation_ratio() > weak_excitation_max) {
        rep.warnings.push_back("weak-excitation ratio " +
                               std::to_string(spec.weak_excitation_ratio()) +
                               " > 0.1: excited-state population not negligible");
    }
    return rep;
}

// --- JSON (config document) -------------------------------------------------

inline void to_json(nlohmann::json& j, const DetectorSpec& d) {
    j = {{"transition_frequency", d.transition_frequency}};
}
inline void from_json(const nlohmann::json& j, DetectorSpec& d) {
    j.at("transition_frequency").get_to(d.transition_frequency);
}

inline void to_json(nlohmann::json& j, const ReservoirSpec& r) {
    j = {{"kind", to_string(r.kind)},
         {"gamma", r.gamma},
         {"center_frequency", r.center_frequency},
         {"bandwidth", r.bandwidth},
         {"mode_count", r.mode_count}};
}
inline void from_json(const nlohmann::json& j, ReservoirSpec& r) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "electronic") r.kind = ReservoirKind::Electronic;
    else if (kind == "radiative") r.kind = ReservoirKind::Radiative;
    else throw nlohmann::json::other_error::create(501, "unknown reservoir kind: " + kind, &j);
    j.at("gamma").get_to(r.gamma);
    j.at("center_frequency").get_to(r.center_frequency);
    j.at("bandwidth").get_to(r.bandwidth);
    j.at("mode_count").get_to(r.mode_count);
}

inline void to_json(nlohmann::json& j, const DriveSpec& d) {
    j = {{"alpha", {{"re", d.alpha.real()}, {"im", d.alpha.imag()}}},
         {"laser_frequency", d.laser_frequency},
         {"coupling", d.coupling}};
}
inline void from_json(const nlohmann::json& j, DriveSpec& d) {
    const auto& a = j.at("alpha");
    if (a.is_number()) d.alpha = complex(a.get<double>(), 0.0);
    else d.alpha = complex(a.at("re").get<double>(), a.value("im", 0.0));
    j.at("laser_frequency").get_to(d.laser_frequency);
    j.at("coupling").get_to(d.coupling);
}

inline void to_json(nlohmann::json& j, const SystemSpec& s) {
    j = {{"detector", s.detector},
         {"electronic", s.electronic},
         {"radiative", s.radiative},
         {"drive", s.drive}};
}
inline void from_json(const nlohmann::json& j, SystemSpec& s) {
    j.at("detector").get_to(s.detector);
    j.at("electronic").get_to(s.electronic);
    j.at("radiative").get_to(s.radiative);
    j.at("drive").get_to(s.drive);
}

} // namespace vacdet
