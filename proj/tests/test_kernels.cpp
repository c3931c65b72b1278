#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "quadrature.hpp"
#include "vacdet/kernels.hpp"

using namespace vacdet;

namespace {

KernelArgs random_args(std::mt19937& rng) {
    std::uniform_real_distribution<double> gamma(0.1, 2.0);
    std::uniform_real_distribution<double> freq(0.1, 5.0);
    std::uniform_real_distribution<double> time(0.0, 8.0);
    std::uniform_real_distribution<double> coupling(0.01, 0.2);
    KernelArgs a;
    a.gamma_eps = gamma(rng);
    a.w_eps = freq(rng);
    a.w_k = freq(rng);
    a.w_k_prime = freq(rng);
    a.t = time(rng);
    a.g_k = coupling(rng);
    a.g_k_prime = coupling(rng);
    return a;
}

} // namespace

TEST_CASE("kernels vanish at t = 0") {
    KernelArgs a;
    a.w_k = 2.0;
    a.w_eps = 1.0;
    a.gamma_eps = 0.5;
    a.g_k = 0.1;
    CHECK(kernel_f(a) == complex(0.0, 0.0));
    CHECK(kernel_h(a) == complex(0.0, 0.0));
    CHECK(kernel_p(a) == complex(0.0, 0.0));
}

TEST_CASE("frozen quadrature reference values") {
    // Values integrated independently at 30-digit precision.
    KernelArgs a;
    SECTION("f, detuned") {
        a.w_k = 2.0;
        a.w_eps = 1.0;
        a.gamma_eps = 0.5;
        a.t = 3.0;
        const complex ref(0.223704085827049512, 1.06921542804904253);
        CHECK(std::abs(kernel_f(a) - ref) < 1e-14);
    }
    SECTION("h, detuned") {
        a.w_k = 0.7;
        a.w_eps = 1.0;
        a.gamma_eps = 0.2;
        a.g_k = 0.01;
        a.t = 5.0;
        const complex ref(-0.0239881532575620105, -0.0160582787916808851);
        CHECK(std::abs(kernel_h(a) - ref) < 1e-16);
    }
    SECTION("p, fully degenerate (secular term)") {
        a.w_k = a.w_k_prime = a.w_eps = 1.0;
        a.gamma_eps = 1.0;
        a.g_k = a.g_k_prime = 0.1;
        a.t = 10.0;
        const complex ref(-0.0755168185547655931, 0.0489621469652455296);
        CHECK(std::abs(kernel_p(a) - ref) < 1e-14);
    }
    SECTION("p, split frequencies") {
        a.w_k = 1.3;
        a.w_k_prime = 0.8;
        a.w_eps = 1.0;
        a.gamma_eps = 0.3;
        a.g_k = a.g_k_prime = 0.05;
        a.t = 4.0;
        const complex ref(-0.0067993076264147822, 0.0106338893257158508);
        CHECK(std::abs(kernel_p(a) - ref) < 1e-16);
    }
    SECTION("x, resonant") {
        const complex ref(-1.25158922037430514, -0.178409716713387664);
        CHECK(std::abs(kernel_x(1.0, 1.0, 0.5, 1.0, 3.0) - ref) < 1e-14);
    }
}

TEST_CASE("closed forms match adaptive quadrature at random points") {
    std::mt19937 rng(20240817);
    for (int trial = 0; trial < 100; ++trial) {
        KernelArgs a = random_args(rng);
        INFO("trial " << trial << ": w_k=" << a.w_k << " w_k'=" << a.w_k_prime
                      << " w_eps=" << a.w_eps << " gamma=" << a.gamma_eps << " t=" << a.t);
        CHECK(std::abs(kernel_f(a) - vacdet_test::quad_f(a)) < 1e-9);
        CHECK(std::abs(kernel_h(a) - vacdet_test::quad_h(a)) < 1e-9);
        CHECK(std::abs(kernel_p(a) - vacdet_test::quad_p(a)) < 1e-9);
    }
}

TEST_CASE("x matches quadrature and reduces to a phase times f") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.1, 4.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double w_k = u(rng), w_eps = u(rng), gamma = 0.25 * u(rng);
        const double t1 = u(rng), t2 = t1 + u(rng);
        const complex x = kernel_x(w_k, w_eps, gamma, t1, t2);
        CHECK(std::abs(x - vacdet_test::quad_x(w_k, w_eps, gamma, t1, t2)) < 1e-9);
        KernelArgs a;
        a.w_k = w_k;
        a.w_eps = w_eps;
        a.gamma_eps = gamma;
        a.t = t2 - t1;
        CHECK(std::abs(x - std::exp(complex(0.0, -w_k * t1)) * kernel_f(a)) < 1e-14);
    }
    CHECK_THROWS_AS(kernel_x(1.0, 1.0, 0.5, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("identity h = i g f holds to 1e-12 relative") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        KernelArgs a = random_args(rng);
        if (a.t == 0.0) a.t = 1.0;
        const complex lhs = kernel_h(a);
        const complex rhs = complex(0.0, 1.0) * a.g_k * kernel_f(a);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), std::abs(rhs)));
    }
}

TEST_CASE("degenerate p limit is continuous") {
    KernelArgs a;
    a.w_k = 1.0;
    a.w_eps = 1.4;
    a.gamma_eps = 0.6;
    a.g_k = a.g_k_prime = 0.1;
    a.t = 5.0;
    a.w_k_prime = a.w_k;
    const complex exact = kernel_p(a);
    a.w_k_prime = a.w_k + 1e-7;
    CHECK(std::abs(kernel_p(a) - exact) < 1e-6 * std::abs(exact));
}

TEST_CASE("kernel magnitude bound |f| <= (1 - e^{-gamma t})/gamma") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        KernelArgs a = random_args(rng);
        const double bound = (1.0 - std::exp(-a.gamma_eps * a.t)) / a.gamma_eps;
        CHECK(std::abs(kernel_f(a)) <= bound + 1e-12);
    }
}

TEST_CASE("tilde kernels are pure phase wraps") {
    std::mt19937 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        KernelArgs a = random_args(rng);
        CHECK(std::abs(std::abs(tilde_f(a)) - std::abs(kernel_f(a))) < 1e-15);
        CHECK(std::abs(std::abs(tilde_p(a)) - std::abs(kernel_p(a))) < 1e-15);
    }
}

TEST_CASE("grid evaluation matches pointwise calls") {
    KernelArgs a;
    a.w_k = 1.2;
    a.w_eps = 1.0;
    a.gamma_eps = 0.4;
    a.w_k_prime = 0.9;
    a.g_k = 0.1;
    a.g_k_prime = 0.05;
    const std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 4.0};
    const auto set = evaluate_kernels(a, grid);
    REQUIRE(set.f_values.size() == grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        a.t = grid[k];
        CHECK(set.f_values[k] == kernel_f(a));
        CHECK(set.h_values[k] == kernel_h(a));
        CHECK(set.p_values[k] == kernel_p(a));
    }
}
