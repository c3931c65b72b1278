// cavity.hpp — Purcell-regime design calculator: branching ratio in the
// bad-cavity limit and efficiency/shot-noise sweeps versus cavity linewidth.

#pragma once

#include <stdexcept>
#include <vector>

#include "vacdet/analytic.hpp"

namespace vacdet {

struct CavityConfig {
    double g_ke{0.0};    // detector-cavity coupling
    double kappa{1.0};   // cavity linewidth
    double gamma_1{1.0}; // electronic damping
    std::vector<double> other_loss_ratios; // additional xi_i = gamma_i/gamma_1

    // kappa >= 10 g_ke
    bool bad_cavity() const { return kappa >= 10.0 * g_ke; }

    double other_losses() const {
        double sum = 0.0;
        for (double x : other_loss_ratios) sum += x;
        return sum;
    }
};

// xi = g^2/(kappa gamma_1) plus any additional loss ratios.
inline double xi_bad_cavity(const CavityConfig& cfg) {
    if (cfg.kappa <= 0.0 || cfg.gamma_1 <= 0.0)
        throw std::invalid_argument("xi_bad_cavity: kappa and gamma_1 must be positive");
    return cfg.g_ke * cfg.g_ke / (cfg.kappa * cfg.gamma_1) + cfg.other_losses();
}

struct CavitySweepRow {
    double kappa{0.0};
    double xi{0.0};
    double efficiency{0.0};
    double shot_noise_ratio{0.0}; // predicted variance/mean, Omega/pi + gamma_1/2
};

// Per-kappa branching ratio, efficiency 1/(1+xi)^2 and the variance/mean
// ratio with Omega fixed by the electronic reservoir. Larger kappa means
// smaller radiative xi, hence higher efficiency.
inline std::vector<CavitySweepRow> efficiency_vs_kappa(const CavityConfig& cfg,
                                                       const std::vector<double>& kappa_grid,
                                                       double electronic_bandwidth) {
    std::vector<CavitySweepRow> rows;
    rows.reserve(kappa_grid.size());
    const double pi = 3.14159265358979323846;
    for (double kappa : kappa_grid) {
        CavityConfig at = cfg;
        at.kappa = kappa;
        CavitySweepRow row;
        row.kappa = kappa;
        row.xi = xi_bad_cavity(at);
        row.efficiency = quantum_efficiency(row.xi);
        row.shot_noise_ratio = electronic_bandwidth / pi + cfg.gamma_1 / 2.0;
        rows.push_back(row);
    }
    return rows;
}

} // namespace vacdet
