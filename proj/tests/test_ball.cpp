// Ball geometry: Green function and regular part, axis profile function,
// ring placements, closed-form sign functions and their derivatives, and the
// scale-ratio quadratic.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "bubblereduce/ball.hpp"

using namespace bubblereduce;

namespace {

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Same deterministic Givens chain on both arguments preserves inner products.
std::vector<double> rotated(const std::vector<double>& v, std::uint64_t seed) {
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * PI);
    std::vector<double> out = v;
    const std::size_t n = out.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double th = ang(rng);
        const double c = std::cos(th), s = std::sin(th);
        const double a = out[i], b = out[i + 1];
        out[i] = c * a - s * b;
        out[i + 1] = s * a + c * b;
    }
    return out;
}

// Uniformly random point with |x| <= rmax, strictly inside the ball.
std::vector<double> random_interior(std::mt19937_64& rng, int n, double rmax) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(static_cast<std::size_t>(n));
    double s2 = 0.0;
    for (auto& xi : x) {
        xi = gauss(rng);
        s2 += xi * xi;
    }
    const double r = rmax * std::pow(u(rng), 1.0 / n) / std::max(std::sqrt(s2), 1e-300);
    for (auto& xi : x) xi *= r;
    return x;
}

std::vector<double> axis_point(double t, int dim) {
    std::vector<double> x(static_cast<std::size_t>(dim), 0.0);
    x[0] = t;
    return x;
}

double fd_derivative(double (*f)(int, double), int N, double t) {
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    return (f(N, t + h) - f(N, t - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("regular part: exact values, symmetry, positivity, equivariance") {
    const std::vector<double> origin7(7, 0.0);
    CHECK(regular_part(7, origin7, origin7) == 1.0);

    // axis closed form H(t e1, t e1) = (1 - t^2)^{2-N}
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
        INFO("t = " << t);
        const auto x = axis_point(t, 7);
        CHECK(rel_err(regular_part(7, x, x), std::pow(1.0 - t * t, -5.0)) < 1e-13);
    }

    auto rng = make_rng(2024);
    for (int N : {7, 10, 15}) {
        for (int rep = 0; rep < 1000; ++rep) {
            const auto x = random_interior(rng, N, 0.995);
            const auto y = random_interior(rng, N, 0.995);
            const double hxy = regular_part(N, x, y);
            const double hyx = regular_part(N, y, x);
            REQUIRE(hxy > 0.0);
            REQUIRE(std::abs(hxy - hyx) <= 1e-12 * hxy);

            const std::uint64_t seed = 77u * static_cast<std::uint64_t>(rep) + 5u;
            const double hrot = regular_part(N, rotated(x, seed), rotated(y, seed));
            REQUIRE(std::abs(hrot - hxy) <= 1e-12 * hxy);
        }
    }

    CHECK_THROWS_AS(regular_part(4, origin7, origin7), std::invalid_argument);
    CHECK_THROWS_AS(regular_part(7, axis_point(1.0, 7), origin7), std::domain_error);
    CHECK_THROWS_AS(regular_part(7, origin7, std::vector<double>(6, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("green function: positivity, symmetry, center interaction, boundary decay") {
    auto rng = make_rng(4096);
    for (int N : {7, 10, 15}) {
        for (int rep = 0; rep < 1000; ++rep) {
            const auto x = random_interior(rng, N, 0.99);
            auto y = random_interior(rng, N, 0.99);
            if (dist2(x, y) == 0.0) y[0] += 0.1;
            const double gxy = green(N, x, y);
            const double gyx = green(N, y, x);
            REQUIRE(gxy > 0.0);
            REQUIRE(std::abs(gxy - gyx) <= 1e-12 * gxy);
        }
    }

    // G(t e1, 0) is the center sign function tau1
    for (double t : {0.05, 0.2, 0.5, 0.8, 0.95}) {
        INFO("t = " << t);
        CHECK(rel_err(green(7, axis_point(t, 7), axis_point(0.0, 7)), tau1(7, t)) < 1e-13);
    }

    // vanishing toward the boundary: with |x| = 1 - 1e-8 the Green function
    // retains only an O(1e-8) fraction of the free-space kernel
    {
        const auto x = axis_point(1.0 - 1e-8, 7);
        const auto y = axis_point(0.3, 7);
        const double kernel = std::pow(std::abs(x[0] - y[0]), -5.0);
        const double g = green(7, x, y);
        CHECK(g > 0.0);
        CHECK(g < 1e-5 * kernel);
    }

    CHECK_THROWS_AS(green(7, axis_point(0.3, 7), axis_point(0.3, 7)), std::domain_error);
    CHECK_THROWS_AS(green(7, axis_point(1.1, 7), axis_point(0.0, 7)), std::domain_error);
}

TEST_CASE("axis profile function phi") {
    // matches the vector form on the axis and is even
    for (double t : {0.2, 0.5, 1.0 / std::sqrt(2.0), 0.9}) {
        INFO("t = " << t);
        CHECK(rel_err(phi_point(7, axis_point(t, 7)), phi_axis(7, t)) < 1e-12);
        CHECK(phi_axis(7, -t) == phi_axis(7, t));
    }

    // closed form at t = 1/2: (3/4)^{-5/2} + 2^5 - 1
    CHECK(rel_err(phi_axis(7, 0.5), std::pow(0.75, -2.5) + 31.0) < 1e-14);

    // the balanced radius 1/sqrt(2) is a strict local minimizer
    const double tm = 1.0 / std::sqrt(2.0);
    CHECK(phi_axis(7, tm) < phi_axis(7, tm - 1e-3));
    CHECK(phi_axis(7, tm) < phi_axis(7, tm + 1e-3));

    CHECK_THROWS_AS(phi_axis(7, 0.0), std::domain_error);
    CHECK_THROWS_AS(phi_axis(7, 1.0), std::domain_error);
    CHECK_THROWS_AS(phi_axis(7, -1.0), std::domain_error);
    CHECK_THROWS_AS(phi_point(7, axis_point(0.0, 7)), std::domain_error);
}

TEST_CASE("ring placement geometry") {
    const auto tri = ring_placement(3, 0.4, 7);
    REQUIRE(tri.size() == 3);
    CHECK(tri[0][0] == 0.4);
    CHECK(tri[0][1] == 0.0);
    for (const auto& p : tri) {
        REQUIRE(p.size() == 7);
        CHECK(rel_err(norm(p), 0.4) < 1e-14);
    }
    // equilateral side sqrt(3) t
    const double side = std::sqrt(3.0) * 0.4;
    CHECK(rel_err(std::sqrt(dist2(tri[0], tri[1])), side) < 1e-13);
    CHECK(rel_err(std::sqrt(dist2(tri[1], tri[2])), side) < 1e-13);
    CHECK(rel_err(std::sqrt(dist2(tri[2], tri[0])), side) < 1e-13);

    const auto sqr = ring_placement(4, 0.6, 5);
    REQUIRE(sqr.size() == 4);
    CHECK(rel_err(std::sqrt(dist2(sqr[0], sqr[1])), std::sqrt(2.0) * 0.6) < 1e-13);
    CHECK(rel_err(std::sqrt(dist2(sqr[0], sqr[3])), std::sqrt(2.0) * 0.6) < 1e-13);
    CHECK(rel_err(std::sqrt(dist2(sqr[0], sqr[2])), 2.0 * 0.6) < 1e-13);

    CHECK_THROWS_AS(ring_placement(0, 0.5, 7), std::invalid_argument);
    CHECK_THROWS_AS(ring_placement(3, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(ring_placement(3, 0.0, 7), std::domain_error);
    CHECK_THROWS_AS(ring_placement(3, 1.0, 7), std::domain_error);
}

TEST_CASE("sign functions match their generic Green-function assembly") {
    for (int N : {7, 10, 15}) {
        for (int i = 1; i <= 19; ++i) {
            const double t = 0.05 * i;
            INFO("N = " << N << ", t = " << t);

            // center interaction
            CHECK(rel_err(tau1(N, t),
                          green(N, axis_point(t, N), axis_point(0.0, N))) < 1e-12);

            // triangle: self-term minus both neighbor interactions
            const auto tri = ring_placement(3, t, N);
            const double g1 = regular_part(N, tri[0], tri[0]) -
                              green(N, tri[0], tri[1]) - green(N, tri[0], tri[2]);
            CHECK(std::abs(gamma1(N, t) - g1) <=
                  1e-12 * std::max(std::abs(g1), regular_part(N, tri[0], tri[0])));

            // square: gamma2 subtracts all three interactions, gamma3 only the
            // diagonal, gamma4 is the nearest-neighbor interaction itself
            const auto sqp = ring_placement(4, t, N);
            const double h11 = regular_part(N, sqp[0], sqp[0]);
            const double g2 = h11 - green(N, sqp[0], sqp[1]) -
                              green(N, sqp[0], sqp[3]) - green(N, sqp[0], sqp[2]);
            const double g3 = h11 - green(N, sqp[0], sqp[2]);
            const double g4 = green(N, sqp[0], sqp[1]);
            CHECK(std::abs(gamma2(N, t) - g2) <= 1e-12 * std::max(std::abs(g2), h11));
            CHECK(std::abs(gamma3(N, t) - g3) <= 1e-12 * std::max(std::abs(g3), h11));
            CHECK(rel_err(gamma4(N, t), g4) < 1e-12);

            // antipodal pair: H(x, x) - G(x, -x) collapses to gamma3 as well
            std::vector<double> xm = axis_point(t, N), xp = axis_point(-t, N);
            const double g0 = regular_part(N, xm, xm) - green(N, xm, xp);
            CHECK(std::abs(gamma3(N, t) - g0) <= 1e-12 * std::max(std::abs(g0), h11));
        }
    }
}

TEST_CASE("sign function derivatives agree with finite differences") {
    struct Pair {
        double (*f)(int, double);
        double (*df)(int, double);
        const char* name;
    };
    const Pair pairs[] = {{tau1, tau1_prime, "tau1"},
                          {gamma1, gamma1_prime, "gamma1"},
                          {gamma2, gamma2_prime, "gamma2"},
                          {gamma3, gamma3_prime, "gamma3"},
                          {gamma4, gamma4_prime, "gamma4"}};
    for (int N : {7, 12}) {
        for (const auto& p : pairs) {
            for (double t : {0.15, 0.35, 0.55, 0.75, 0.9}) {
                INFO(p.name << ", N = " << N << ", t = " << t);
                const double want = p.df(N, t);
                const double got = fd_derivative(p.f, N, t);
                CHECK(std::abs(got - want) <=
                      1e-6 * std::max({std::abs(want), std::abs(p.f(N, t)), 1.0}));
            }
        }
    }
}

TEST_CASE("sign function monotonicity on a dense grid") {
    const int n = 10000;
    for (int N : {7, 10, 15}) {
        INFO("N = " << N);
        double min_g1p = std::numeric_limits<double>::infinity();
        double min_g3p = std::numeric_limits<double>::infinity();
        double max_t1p = -std::numeric_limits<double>::infinity();
        for (int i = 1; i <= n; ++i) {
            const double t = static_cast<double>(i) / (n + 1.0);
            min_g1p = std::min(min_g1p, gamma1_prime(N, t));
            min_g3p = std::min(min_g3p, gamma3_prime(N, t));
            max_t1p = std::max(max_t1p, tau1_prime(N, t));
        }
        CHECK(min_g1p > 0.0);   // gamma1 strictly increasing
        CHECK(min_g3p > 0.0);   // gamma3 strictly increasing
        CHECK(max_t1p < 0.0);   // tau1 strictly decreasing
    }
}

TEST_CASE("frozen sign-change locations at N = 7") {
    // root of gamma1
    const double t_g1 = 0.48361160192979424;
    CHECK(gamma1(7, t_g1 - 1e-9) < 0.0);
    CHECK(gamma1(7, t_g1 + 1e-9) > 0.0);

    // root of gamma3
    const double t1 = 0.4039270875481458;
    CHECK(gamma3(7, t1 - 1e-9) < 0.0);
    CHECK(gamma3(7, t1 + 1e-9) > 0.0);
    CHECK(t1 < 0.5);

    // root of gamma3 - 2 tau1^2
    const double t2 = 0.7167549763576017;
    auto s = [](double t) { return gamma3(7, t) - 2.0 * sq(tau1(7, t)); };
    CHECK(s(t2 - 1e-9) < 0.0);
    CHECK(s(t2 + 1e-9) > 0.0);
    CHECK(t2 > 0.5);
}

TEST_CASE("scale-ratio quadratic") {
    auto rng = make_rng(1234);
    std::uniform_real_distribution<double> u(0.05, 5.0);
    for (int rep = 0; rep < 500; ++rep) {
        const double h00 = u(rng);
        const double g = u(rng);
        const double c = u(rng);
        for (int m : {1, 2, 3}) {
            const AlphaBeta ab = alpha_beta(h00, g, c, m);
            REQUIRE(ab.discriminant > 0.0);
            REQUIRE(ab.alpha > 0.0);  // + root is positive for c > 0
            const double resid = h00 * sq(ab.alpha) + m * g * ab.alpha - c;
            const double scale = std::max({h00 * sq(ab.alpha), m * g * ab.alpha, c});
            REQUIRE(std::abs(resid) <= 1e-13 * scale);
            REQUIRE(ab.beta == c + g * ab.alpha);
        }
    }

    // conjugate form keeps full accuracy when |c| << (m g)^2
    {
        const AlphaBeta ab = alpha_beta(1.0, 1.0, 1e-20, 2);
        CHECK(rel_err(ab.alpha, 5e-21) < 1e-14);
    }

    // negative discriminant reported as-is, roots NaN, no throw
    {
        const AlphaBeta ab = alpha_beta(1.0, 0.1, -1.0, 1);
        CHECK(ab.discriminant < 0.0);
        CHECK(std::isnan(ab.alpha));
        CHECK(std::isnan(ab.beta));
    }

    // m = 0 drops the linear term: alpha = sqrt(c / h00)
    {
        const AlphaBeta ab = alpha_beta(4.0, 7.0, 9.0, 0);
        CHECK(rel_err(ab.alpha, 1.5) < 1e-15);
        CHECK(rel_err(ab.beta, 9.0 + 7.0 * 1.5) < 1e-15);
    }

    CHECK_THROWS_AS(alpha_beta(1.0, 1.0, 1.0, -1), std::invalid_argument);
}
