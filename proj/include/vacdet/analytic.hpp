// analytic.hpp — Markov-approximation closed forms for the photocurrent:
// transient and steady mean, quantum efficiency, variance, and the
// stationary two-time correlation.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vacdet/kernels.hpp"
#include "vacdet/model.hpp"

namespace vacdet {

struct SteadyStateSummary {
    double mean_current{0.0};          // rate of electronic-reservoir quanta
    double efficiency_factor{1.0};     // 1/(1+xi)^2
    double normally_ordered_current{0.0}; // <i>_n.o., the xi = 0 resonant reference
    double detuning{0.0};              // w_L - w_eps
};

// chi_e(tau): delta-like electronic reservoir correlation. The discrete
// weight (its value at tau = 0) is fixed to 2 gamma_1 Omega/pi so that the
// correlation at zero lag reproduces the Omega/pi term of the variance.
struct ElectronicCorrelationModel {
    double delta_weight{0.0};
    bool inside_lorentzian{true}; // chi_e shares the Lorentzian prefactor, as printed
};

struct CorrelationTrace {
    std::vector<double> tau_grid;
    std::vector<complex> values;        // smooth part; values[0] also carries chi_e if tau=0
    std::vector<complex> smooth_values; // gamma_eps-decaying part only
    ElectronicCorrelationModel electronic_correlation_model;
};

struct VarianceSummary {
    double variance{0.0};          // (Omega/pi + gamma_1/2)<i> - <i>^2/2
    double shot_noise_approx{0.0}; // (Omega/pi)<i>
    double fano_ratio{0.0};        // variance / mean (0 when mean is 0)
};

// <i>(t) = 2 |alpha|^2 gamma_1 g_L^2 |f_L(t)|^2
inline double mean_current_transient(const SystemSpec& spec, double t) {
    if (t < 0.0) throw std::invalid_argument("mean_current_transient: t >= 0 required");
    KernelArgs a;
    a.w_k = spec.drive.laser_frequency;
    a.w_eps = spec.detector.transition_frequency;
    a.gamma_eps = spec.gamma_total();
    a.t = t;
    const double fmag = std::abs(kernel_f(a));
    return 2.0 * std::norm(spec.drive.alpha) * spec.electronic.gamma *
           spec.drive.coupling * spec.drive.coupling * fmag * fmag;
}

// Lorentzian steady current, 2 gamma_1 g_L^2 |alpha|^2 / (gamma_eps^2 + detuning^2)
inline SteadyStateSummary mean_current_steady(const SystemSpec& spec) {
    SteadyStateSummary s;
    s.detuning = spec.detuning();
    const double ge = spec.gamma_total();
    const double num = 2.0 * spec.electronic.gamma * spec.drive.coupling *
                       spec.drive.coupling * std::norm(spec.drive.alpha);
    s.mean_current = num / (ge * ge + s.detuning * s.detuning);
    const double xi = spec.xi();
    s.efficiency_factor = 1.0 / ((1.0 + xi) * (1.0 + xi));
    // xi = 0 reference: 2 g_L^2 |alpha|^2 / gamma_1 at resonance
    s.normally_ordered_current = 2.0 * spec.drive.coupling * spec.drive.coupling *
                                 std::norm(spec.drive.alpha) / spec.electronic.gamma;
    return s;
}

inline double quantum_efficiency(double xi) {
    if (xi < 0.0) throw std::invalid_argument("quantum_efficiency: xi >= 0 required");
    return 1.0 / ((1.0 + xi) * (1.0 + xi));
}

// Discrete-sum delta weight 2 gamma of the Markov replacement
// sum_l g_l^2 e^{i w_l (t-t')} -> 2 gamma delta(t-t').
inline double markov_delta_weight(const ReservoirSpec& r) { return 2.0 * r.gamma; }

inline VarianceSummary current_variance(const SystemSpec& spec) {
    VarianceSummary v;
    const double mean = mean_current_steady(spec).mean_current;
    const double omega = spec.electronic.bandwidth;
    const double pi = 3.14159265358979323846;
    v.variance = (omega / pi + spec.electronic.gamma / 2.0) * mean - mean * mean / 2.0;
    v.shot_noise_approx = omega / pi * mean;
    v.fano_ratio = mean > 0.0 ? v.variance / mean : 0.0;
    return v;
}

// <i(t) i(t+tau)> ~ g_L^2 |alpha|^2 e^{-i w_L tau} / (gamma_eps^2 + detuning^2)
//                   * (gamma_1^2 e^{i w_eps tau - gamma_eps tau} + chi_e(tau))
// up to an omitted O(g_L^4) tail. Returned complex; symmetrization is the
// caller's choice.
inline CorrelationTrace correlation_stationary(const SystemSpec& spec,
                                               const std::vector<double>& tau_grid) {
    CorrelationTrace trace;
    trace.tau_grid = tau_grid;
    const double ge = spec.gamma_total();
    const double det = spec.detuning();
    const double g1 = spec.electronic.gamma;
    const double pi = 3.14159265358979323846;
    const double lorentz = 1.0 / (ge * ge + det * det);
    const double amp = spec.drive.coupling * spec.drive.coupling * std::norm(spec.drive.alpha);
    trace.electronic_correlation_model.delta_weight =
        2.0 * g1 * spec.electronic.bandwidth / pi;
    const complex i(0.0, 1.0);
    for (double tau : tau_grid) {
        if (tau < 0.0)
            throw std::invalid_argument(
                "correlation_stationary: negative lag; reflect via conjugate symmetry");
        const complex smooth =
            amp * lorentz * g1 * g1 * std::exp(-i * det * tau - ge * tau);
        complex value = smooth;
        if (tau == 0.0)
            value += amp * lorentz * trace.electronic_correlation_model.delta_weight;
        trace.smooth_values.push_back(smooth);
        trace.values.push_back(value);
    }
    return trace;
}

} // namespace vacdet
