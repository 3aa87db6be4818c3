// Unit tests for the shared utilities and the adaptive quadrature layer.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "bubblereduce/common.hpp"
#include "bubblereduce/quadrature.hpp"

using namespace bubblereduce;

namespace {
double rel_err(double got, double want) {
    return std::abs(got - want) / std::abs(want);
}
}  // namespace

TEST_CASE("sphere_area matches closed forms in low dimensions") {
    CHECK(rel_err(sphere_area(1), 2.0) < 1e-15);
    CHECK(rel_err(sphere_area(2), 2.0 * PI) < 1e-15);
    CHECK(rel_err(sphere_area(3), 4.0 * PI) < 1e-15);
    CHECK(rel_err(sphere_area(4), 2.0 * PI * PI) < 1e-15);
    // |S^6| = 16 pi^3 / 15.
    CHECK(rel_err(sphere_area(7), 16.0 * PI * PI * PI / 15.0) < 1e-14);
    CHECK(rel_err(ball_volume(3), 4.0 * PI / 3.0) < 1e-15);
}

TEST_CASE("Kahan summation survives catastrophic cancellation") {
    KahanSum s;
    s.add(1e16);
    s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1.0);

    // Many small terms against one large one.
    KahanSum t;
    t.add(1e12);
    for (int i = 0; i < 100000; ++i) t.add(1e-4);
    t.add(-1e12);
    CHECK(rel_err(t.value(), 10.0) < 1e-12);
}

TEST_CASE("smooth integrands are integrated to tight tolerance") {
    auto r1 = integrate([](double x) { return x * x * x; }, 0.0, 1.0);
    CHECK(rel_err(r1.value, 0.25) < 1e-14);

    auto r2 = integrate([](double x) { return std::sin(x); }, 0.0, PI);
    CHECK(rel_err(r2.value, 2.0) < 1e-13);

    // Narrow Gaussian: adaptivity has to find the spike at 1/2.
    auto r3 = integrate(
        [](double x) { return std::exp(-1e4 * sq(x - 0.5)); }, 0.0, 1.0);
    CHECK(rel_err(r3.value, std::sqrt(PI) * 1e-2) < 1e-11);
}

TEST_CASE("hints pre-split kinked integrands") {
    auto f = [](double x) { return std::abs(x - 1.0 / 3.0); };
    auto r = integrate(f, 0.0, 1.0, {1.0 / 3.0});
    CHECK(rel_err(r.value, 5.0 / 18.0) < 1e-13);
}

TEST_CASE("endpoint singularities integrate with graded panels") {
    // int_0^1 x^{-1/2} dx = 2; nodes are interior so x = 0 is never touched.
    auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                       graded_hints(0.0, 1.0));
    CHECK(rel_err(r.value, 2.0) < 1e-11);

    // int_0^1 ln(1/x) dx = 1.
    auto r2 = integrate([](double x) { return -std::log(x); }, 0.0, 1.0,
                        graded_hints(0.0, 1.0));
    CHECK(rel_err(r2.value, 1.0) < 1e-12);
}

TEST_CASE("half-line integrals through the rational map") {
    auto r1 = integrate_to_inf([](double r) { return std::exp(-r); }, 0.0);
    CHECK(rel_err(r1.value, 1.0) < 1e-12);

    // Radial bubble-type integrands for several dimensions.
    for (int N : {7, 10, 15}) {
        auto f = [N](double r) {
            return std::pow(r, N - 1) * std::pow(1.0 + r * r, -static_cast<double>(N));
        };
        auto got = integrate_to_inf(f, 0.0, {1.0});
        CHECK(rel_err(got.value, radial_power_integral(N - 1, N)) < 1e-12);
    }

    // Shifted lower limit.
    auto r2 = integrate_to_inf([](double r) { return std::exp(-r); }, 2.0);
    CHECK(rel_err(r2.value, std::exp(-2.0)) < 1e-12);
}

TEST_CASE("iterated 2D integrals over variable slices") {
    // Triangle 0 <= y <= x <= 1 has area 1/2.
    auto tri = integrate2d([](double, double) { return 1.0; }, 0.0, 1.0,
                           [](double) { return 0.0; },
                           [](double x) { return x; });
    CHECK(rel_err(tri.value, 0.5) < 1e-12);

    // Quarter disc area pi/4.
    QuadOptions outer;
    outer.rel_tol = 1e-12;
    QuadOptions inner;
    inner.rel_tol = 1e-13;
    auto disc = integrate2d([](double, double) { return 1.0; }, 0.0, 1.0,
                            [](double) { return 0.0; },
                            [](double x) { return std::sqrt(std::max(0.0, 1.0 - x * x)); },
                            outer, inner);
    CHECK(rel_err(disc.value, PI / 4.0) < 1e-9);

    // Separable smooth integrand: int int x e^{-y}, x in [0,1], y in [0,2].
    auto sep = integrate2d([](double x, double y) { return x * std::exp(-y); },
                           0.0, 1.0, [](double) { return 0.0; },
                           [](double) { return 2.0; });
    CHECK(rel_err(sep.value, 0.5 * (1.0 - std::exp(-2.0))) < 1e-11);
}

TEST_CASE("parallel_for is deterministic across thread counts") {
    auto run = [](const char* threads) {
        setenv("BUBBLE_REDUCE_THREADS", threads, 1);
        std::vector<double> slots(257);
        parallel_for(slots.size(), [&](std::size_t i) {
            double acc = 0.0;
            for (int k = 1; k <= 50; ++k) acc += std::sin(static_cast<double>(i) * k) / k;
            slots[i] = acc;
        });
        unsetenv("BUBBLE_REDUCE_THREADS");
        return slots;
    };
    auto a = run("1");
    auto b = run("4");
    auto c = run("7");
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == b[i]);
        CHECK(a[i] == c[i]);
    }
}

TEST_CASE("format_g17 round-trips doubles exactly") {
    auto rng = make_rng(20260822ull);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-60, 60);
    for (int i = 0; i < 200; ++i) {
        double x = mant(rng) * std::ldexp(1.0, expo(rng));
        std::string s = format_g17(x);
        double back = std::strtod(s.c_str(), nullptr);
        CHECK(back == x);
    }
    CHECK(format_g17(0.5) == "0.5");
    CHECK(format_int(42) == "42");
}

TEST_CASE("log-Beta, digamma, and the radial power integral closed form") {
    // lbeta against exact rational Beta values
    CHECK(std::exp(lbeta(1.0, 1.0)) == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(std::exp(lbeta(2.0, 3.0)) == Catch::Approx(1.0 / 12.0).epsilon(1e-14));
    CHECK(std::exp(lbeta(0.5, 0.5)) == Catch::Approx(PI).epsilon(1e-14));

    // digamma at classical points
    const double euler_gamma = 0.57721566490153286;
    CHECK(digamma(1.0) == Catch::Approx(-euler_gamma).epsilon(1e-13));
    CHECK(digamma(0.5) == Catch::Approx(-euler_gamma - 2.0 * std::log(2.0)).epsilon(1e-13));
    CHECK(digamma(7.0) == Catch::Approx(-euler_gamma + 49.0 / 20.0).epsilon(1e-13));
    CHECK_THROWS_AS(digamma(0.0), std::domain_error);
    CHECK_THROWS_AS(digamma(-2.5), std::domain_error);

    // recurrence psi(x+1) = psi(x) + 1/x on random points
    auto rng = make_rng(5);
    std::uniform_real_distribution<double> u(0.05, 30.0);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        REQUIRE(digamma(x + 1.0) ==
                Catch::Approx(digamma(x) + 1.0 / x).margin(1e-12 * (1.0 + std::abs(digamma(x)))));
    }

    // radial_power_integral closed examples and divergence guard
    CHECK(radial_power_integral(0.0, 1.0) == Catch::Approx(PI / 2.0).epsilon(1e-14));
    CHECK(radial_power_integral(1.0, 2.0) == Catch::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(radial_power_integral(-1.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(radial_power_integral(3.0, 2.0), std::domain_error);

    // (a=6, p=4.5): the N=7 kernel moment equals adaptive quadrature to 1e-12
    const double closed = radial_power_integral(6.0, 4.5);
    QuadOptions opt;
    opt.rel_tol = 1e-13;
    auto f = [](double r) { return std::pow(r, 6.0) * std::pow(1.0 + r * r, -4.5); };
    const double quad = integrate_to_inf(f, 0.0, {1.0}, opt).value;
    CHECK(quad == Catch::Approx(closed).epsilon(1e-12));
}
