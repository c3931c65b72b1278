// Adaptive-quadrature reference implementations of the response kernels,
// used to certify the closed forms in kernels.hpp. Deliberately independent:
// straight time-domain integrals, no shared algebra beyond the integrands.

#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include "vacdet/kernels.hpp"

namespace vacdet_test {

using vacdet::complex;

inline complex simpson(const std::function<complex(double)>& fn, double a, double b) {
    const double m = 0.5 * (a + b);
    return (b - a) / 6.0 * (fn(a) + 4.0 * fn(m) + fn(b));
}

inline complex adaptive(const std::function<complex(double)>& fn, double a, double b,
                        complex whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const complex left = simpson(fn, a, m);
    const complex right = simpson(fn, m, b);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(fn, a, m, left, tol / 2.0, depth - 1) +
           adaptive(fn, m, b, right, tol / 2.0, depth - 1);
}

inline complex integrate(const std::function<complex(double)>& fn, double a, double b,
                         double tol = 1e-12) {
    if (b <= a) return {0.0, 0.0};
    // split so the resolution tracks the fastest phase reasonably
    const int chunks = std::max(1, static_cast<int>((b - a) * 2.0));
    complex acc = 0.0;
    for (int c = 0; c < chunks; ++c) {
        const double lo = a + (b - a) * c / chunks;
        const double hi = a + (b - a) * (c + 1) / chunks;
        acc += adaptive(fn, lo, hi, simpson(fn, lo, hi), tol / chunks, 40);
    }
    return acc;
}

inline complex quad_f(const vacdet::KernelArgs& a) {
    const complex i(0.0, 1.0);
    return integrate(
        [&](double tp) {
            return std::exp(-i * a.w_k * tp - (i * a.w_eps + a.gamma_eps) * (a.t - tp));
        },
        0.0, a.t);
}

inline complex quad_h(const vacdet::KernelArgs& a) {
    const complex i(0.0, 1.0);
    return i * a.g_k *
           integrate(
               [&](double tp) {
                   return std::exp(-(i * a.w_eps + a.gamma_eps) * tp - i * a.w_k * (a.t - tp));
               },
               0.0, a.t);
}

inline complex quad_p(const vacdet::KernelArgs& a) {
    const complex i(0.0, 1.0);
    return a.g_k * a.g_k_prime *
           integrate(
               [&](double tp) {
                   vacdet::KernelArgs inner = a;
                   inner.w_k = a.w_k_prime;
                   inner.t = tp;
                   // f_{k'} validated independently against quad_f
                   return vacdet::kernel_f(inner) * std::exp(-i * a.w_k * (a.t - tp));
               },
               0.0, a.t);
}

inline complex quad_x(double w_k, double w_eps, double gamma_eps, double t1, double t2) {
    const complex i(0.0, 1.0);
    return integrate(
        [&](double tp) {
            return std::exp(-i * w_k * (t1 + tp) -
                            (i * w_eps + gamma_eps) * (t2 - t1 - tp));
        },
        0.0, t2 - t1);
}

} // namespace vacdet_test
