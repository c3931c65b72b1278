// kernels.hpp — closed-form response kernels of the damped detector transition
//
// f, h, p, x are the elementary exponential integrals that express the formal
// solution of the linear Heisenberg equations. All closed forms here are
// validated against adaptive quadrature by the test suite; no quadrature
// fallback ships in the library.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "vacdet/model.hpp"

namespace vacdet {

struct KernelArgs {
    double w_k{0.0};
    double w_k_prime{0.0};
    double w_eps{0.0};
    double gamma_eps{1.0};
    double t{0.0};
    double g_k{0.0};
    double g_k_prime{0.0};
};

// Evaluated kernels on a shared time grid; entry 0 corresponds to t = 0.
struct KernelSet {
    std::vector<double> time_grid;
    std::vector<complex> f_values;
    std::vector<complex> h_values;
    std::vector<complex> p_values;
};

namespace detail {

// phi1(z) = (e^z - 1)/z, relative-accurate near z = 0.
inline complex phi1(complex z) {
    if (std::abs(z) < 0.5) {
        complex sum = 1.0, term = 1.0;
        for (int n = 2; n <= 22; ++n) {
            term *= z / static_cast<double>(n);
            sum += term;
        }
        return sum;
    }
    return (std::exp(z) - 1.0) / z;
}

// E(a, t) = int_0^t e^{a t'} dt' = t phi1(a t); E(0, t) = t.
inline complex eint(complex a, double t) { return t * phi1(a * t); }

} // namespace detail

// Below this frequency split, p_kk' is evaluated through the series limit of
// its removable singularity (the generic branch cancels catastrophically).
inline double tol_degenerate(double gamma_eps, double w_eps) {
    return 1e-8 * std::max(gamma_eps, std::abs(w_eps));
}

// f_k(t) = int_0^t dt' e^{-i w_k t' - (i w_eps + gamma)(t - t')}
//        = (e^{-i w_k t} - e^{-(i w_eps + gamma) t}) / (gamma + i(w_eps - w_k))
inline complex kernel_f(const KernelArgs& a) {
    const complex i(0.0, 1.0);
    const complex pole = a.gamma_eps + i * (a.w_eps - a.w_k); // |pole| >= gamma > 0
    const double t = a.t;
    if (t == 0.0) return {0.0, 0.0};
    if (std::abs(pole) * t < 0.5)
        return detail::eint(pole, t) * std::exp(-(i * a.w_eps + a.gamma_eps) * t);
    return (std::exp(-i * a.w_k * t) - std::exp(-(i * a.w_eps + a.gamma_eps) * t)) / pole;
}

// h_keps(t) = i g_k int_0^t dt' e^{-(i w_eps + gamma) t' - i w_k (t - t')}.
// Evaluated through its own antiderivative; algebraically equal to i g_k f_k.
inline complex kernel_h(const KernelArgs& a) {
    const complex i(0.0, 1.0);
    const double t = a.t;
    if (t == 0.0) return {0.0, 0.0};
    const complex b = i * a.w_k - i * a.w_eps - a.gamma_eps;
    return i * a.g_k * std::exp(-i * a.w_k * t) * detail::eint(b, t);
}

// p_kk'eps(t) = g_k g_k' int_0^t dt' f_k'(t') e^{-i w_k (t - t')}
//            = (g_k g_k'/pole') e^{-i w_k t} [E(i(w_k - w_k'), t) - E(-pole, t)]
// The w_k -> w_k' coincidence is removable; E handles it by series, producing
// the secular t e^{-i w_k t} term in the exact limit.
inline complex kernel_p(const KernelArgs& a) {
    const complex i(0.0, 1.0);
    const double t = a.t;
    if (t == 0.0) return {0.0, 0.0};
    const complex pole = a.gamma_eps + i * (a.w_eps - a.w_k);
    const complex pole_prime = a.gamma_eps + i * (a.w_eps - a.w_k_prime);
    const complex split = i * (a.w_k - a.w_k_prime);
    return a.g_k * a.g_k_prime / pole_prime * std::exp(-i * a.w_k * t) *
           (detail::eint(split, t) - detail::eint(-pole, t));
}

// x_keps(t1, t2) = int_0^{t2-t1} e^{-i w_k (t1+t') - (i w_eps+gamma)(t2-t1-t')} dt'
//               = e^{-i w_k t1} f_k(t2 - t1)
inline complex kernel_x(double w_k, double w_eps, double gamma_eps, double t1, double t2) {
    if (t2 < t1) throw std::invalid_argument("kernel_x: requires t2 >= t1");
    const complex i(0.0, 1.0);
    KernelArgs a;
    a.w_k = w_k;
    a.w_eps = w_eps;
    a.gamma_eps = gamma_eps;
    a.t = t2 - t1;
    return std::exp(-i * w_k * t1) * kernel_f(a);
}

// Tilde kernels of the stationary-correlation bookkeeping: pure phase wraps.
inline complex tilde_f(const KernelArgs& a) {
    return kernel_f(a) * std::exp(complex(0.0, a.w_k * a.t));
}
inline complex tilde_p(const KernelArgs& a) {
    return kernel_p(a) * std::exp(complex(0.0, a.w_k_prime * a.t));
}
inline complex tilde_x(double w_k, double w_eps, double gamma_eps, double t1, double t2) {
    return kernel_x(w_k, w_eps, gamma_eps, t1, t2) * std::exp(complex(0.0, w_k * t2));
}

// Evaluate f, h, p on a grid at fixed frequencies/couplings.
inline KernelSet evaluate_kernels(KernelArgs a, const std::vector<double>& time_grid) {
    KernelSet set;
    set.time_grid = time_grid;
    set.f_values.reserve(time_grid.size());
    set.h_values.reserve(time_grid.size());
    set.p_values.reserve(time_grid.size());
    for (double t : time_grid) {
        a.t = t;
        set.f_values.push_back(kernel_f(a));
        set.h_values.push_back(kernel_h(a));
        set.p_values.push_back(kernel_p(a));
    }
    return set;
}

} // namespace vacdet
