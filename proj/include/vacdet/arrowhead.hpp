// arrowhead.hpp — symmetric arrowhead eigensolver (secular equation)
//
// The discretized coupled-mode generator is an arrowhead matrix: one tip row
// (the detector) bordering a diagonal of mode frequencies. Eigenpairs come
// from the secular equation in O(n^2), with each root located relative to its
// nearest pole so eigenvector components c_j/(lambda - w_j) stay accurate.

#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace vacdet::detail {

struct ArrowheadSolution {
    // ascending eigenvalues, size K+1
    std::vector<double> lambda;
    // orthonormal eigenvectors, (K+1) x (K+1) column-major;
    // row 0 is the tip, row 1+j is mode j
    std::vector<double> vectors;

    std::size_t dim() const { return lambda.size(); }
};

// Secular function value and derivative at lambda = w[near] + delta.
// diffs[j] = w[near] - w[j].
struct SecularEval {
    double value;
    double slope;
};

inline SecularEval secular_at(double tip_minus_near, double delta,
                              const std::vector<double>& diffs,
                              const std::vector<double>& c2) {
    double value = tip_minus_near - delta;
    double slope = -1.0;
    const std::size_t k = diffs.size();
    for (std::size_t j = 0; j < k; ++j) {
        const double inv = 1.0 / (diffs[j] + delta);
        value += c2[j] * inv;
        slope -= c2[j] * inv * inv;
    }
    return {value, slope};
}

// Eigenproblem for H with H[0][0] = tip, H[0][1+j] = c[j], H[1+j][1+j] = w[j].
// w must be strictly ascending and every c[j] nonzero.
inline ArrowheadSolution solve_arrowhead(double tip, const std::vector<double>& w,
                                         const std::vector<double>& c) {
    const std::size_t k = w.size();
    assert(c.size() == k);
    ArrowheadSolution sol;
    const std::size_t n = k + 1;
    sol.lambda.resize(n);
    sol.vectors.assign(n * n, 0.0);
    if (k == 0) {
        sol.lambda[0] = tip;
        sol.vectors[0] = 1.0;
        return sol;
    }
    for (std::size_t j = 0; j + 1 < k; ++j)
        if (!(w[j] < w[j + 1]))
            throw std::invalid_argument("solve_arrowhead: frequencies must be strictly ascending");

    std::vector<double> c2(k);
    double cnorm2 = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        c2[j] = c[j] * c[j];
        cnorm2 += c2[j];
    }
    const double cnorm = std::sqrt(cnorm2);
    const double lo = std::min(tip, w.front()) - cnorm - 1e-30;
    const double hi = std::max(tip, w.back()) + cnorm + 1e-30;

    // Roots interlace: one in (lo, w_0), one per gap, one in (w_{k-1}, hi).
    std::vector<double> near_index(n), delta_root(n);
    std::vector<double> diffs(k);
    for (std::size_t m = 0; m < n; ++m) {
        // Pick the nearer pole and a delta bracket with f(d_lo) > 0 > f(d_hi).
        std::size_t near;
        double d_lo, d_hi;
        if (m == 0) {
            near = 0;
            d_lo = lo - w[0];
            d_hi = 0.0;
        } else if (m == k) {
            near = k - 1;
            d_lo = 0.0;
            d_hi = hi - w[k - 1];
        } else {
            const double gap = w[m] - w[m - 1];
            // decide side by the sign at the gap midpoint
            near = m - 1;
            for (std::size_t j = 0; j < k; ++j) diffs[j] = w[near] - w[j];
            const SecularEval mid = secular_at(tip - w[near], gap / 2.0, diffs, c2);
            if (mid.value > 0.0) {
                near = m; // root in upper half, measure from the upper pole
                d_lo = -gap / 2.0;
                d_hi = 0.0;
            } else {
                d_lo = 0.0;
                d_hi = gap / 2.0;
            }
        }
        for (std::size_t j = 0; j < k; ++j) diffs[j] = w[near] - w[j];
        const double tip_rel = tip - w[near];

        // Safeguarded Newton on the strictly decreasing secular function.
        double d = 0.5 * (d_lo + d_hi);
        for (int iter = 0; iter < 120; ++iter) {
            const SecularEval e = secular_at(tip_rel, d, diffs, c2);
            if (e.value > 0.0)
                d_lo = d;
            else
                d_hi = d;
            double step = e.value / e.slope; // slope < 0
            double next = d - step;
            if (!(next > d_lo && next < d_hi)) next = 0.5 * (d_lo + d_hi);
            const double width = d_hi - d_lo;
            if (width <= 4.0 * 2.220446049250313e-16 * std::max(std::abs(d_lo), std::abs(d_hi)) ||
                next == d) {
                d = next;
                break;
            }
            d = next;
        }
        near_index[m] = static_cast<double>(near);
        delta_root[m] = d;
        sol.lambda[m] = w[near] + d;
    }

    // Eigenvectors: v_tip = 1, v_j = c_j/(lambda - w_j), normalized.
    for (std::size_t m = 0; m < n; ++m) {
        const std::size_t near = static_cast<std::size_t>(near_index[m]);
        const double d = delta_root[m];
        double* col = sol.vectors.data() + m * n;
        double norm2 = 1.0;
        col[0] = 1.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double dist = (w[near] - w[j]) + d;
            const double v = c[j] / dist;
            col[1 + j] = v;
            norm2 += v * v;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t r = 0; r < n; ++r) col[r] *= inv;
    }
    return sol;
}

} // namespace vacdet::detail
