#pragma once

// Integral layer: every whole-space integral feeding the expansion
// constants. Closed Beta/digamma forms are canonical wherever they exist;
// adaptive quadrature provides the independent cross-check (and is canonical
// for the Hardy-profile and tower-kernel integrals, which have no elementary
// closed form at general parameters).

#include <cmath>
#include <stdexcept>
#include <vector>

#include "common.hpp"
#include "profiles.hpp"
#include "quadrature.hpp"

namespace bubblereduce {

// ---------------------------------------------------------------------------
// Instanton integrals
// ---------------------------------------------------------------------------

struct InstantonIntegrals {
    double int_U_2star = 0.0;          // int U_{1,0}^{2*}            ( = S0^{N/2} )
    double int_U_2star_minus1 = 0.0;   // int U_{1,0}^{2*-1}
    double int_U_lnU = 0.0;            // int U_{1,0}^{2*} ln U_{1,0}
    double int_standard_kernel = 0.0;  // int (1+|z|^2)^{-(N+2)/2}
};

namespace idetail {

inline void check_dimension_ge5(int N, const char* who) {
    if (N < 5) throw std::invalid_argument(std::string(who) + ": dimension-too-small (N >= 5 required)");
}

// exp(sum of logs) product helper for large-N safety.
inline double log_product(std::initializer_list<double> logs) {
    KahanSum s;
    for (double l : logs) s.add(l);
    return std::exp(s.value());
}

// Iterated quadrature of f(r, c) over (0, inf) x [-1, 1], the (radius, cosine)
// coordinates of an axisymmetric integrand whose kernel peaks at
// (r, c) = (rho, -1). The half-line is compactified by r = s/(1-s); the outer
// panels are graded into the image of r = rho from both sides, the inner
// (cosine) panels into both endpoints. The inner tolerance is one order
// tighter than the outer, and the outer pass declares the inner tolerance as
// its per-panel noise floor so it never refines against inner quadrature
// noise.
template <class F>
inline double half_line_times_cosine(F&& f, double rho, const QuadratureSpec& q) {
    QuadOptions outer = to_options(q);
    QuadOptions inner = to_options(q);
    inner.rel_tol = std::max(0.1 * q.rel_tol, 1e-14);
    outer.noise_floor = 10.0 * inner.rel_tol;

    std::vector<double> chints = graded_hints(-1.0, 1.0, q.grading_levels, q.grading_ratio);
    {
        const std::vector<double> top =
            graded_hints(1.0, -1.0, q.grading_levels, q.grading_ratio);
        chints.insert(chints.end(), top.begin(), top.end());
    }
    chints.push_back(0.0);

    std::vector<double> shints{0.5};  // image of the scale point r = 1
    if (rho > 0.0) {
        const double srho = rho / (1.0 + rho);
        shints.push_back(srho);
        for (double h : graded_hints(srho, 0.0, 12, q.grading_ratio)) shints.push_back(h);
        for (double h : graded_hints(srho, 1.0, 12, q.grading_ratio)) shints.push_back(h);
    }

    auto g = [&f](double s, double c) {
        const double om = 1.0 - s;
        return f(s / om, c) / (om * om);
    };
    return integrate2d_hinted(
               g, 0.0, 1.0, [](double) { return -1.0; }, [](double) { return 1.0; },
               [&chints](double) { return chints; }, shints, outer, inner)
        .value;
}

}  // namespace idetail

// Closed forms via radial reduction, int r^a (1+r^2)^{-p} dr = rpi(a, p):
//   int U^{2*}      = C0^{2*}   * w_N * rpi(N-1, N)
//   int U^{2*-1}    = C0^{2*-1} * w_N * rpi(N-1, (N+2)/2)
//   int U^{2*} ln U = C0^{2*}   * w_N * rpi(N-1, N)
//                       * ( ln C0 - (N-2)/2 * (psi(N) - psi(N/2)) )
//   kernel          =             w_N * rpi(N-1, (N+2)/2)
// where w_N = |S^{N-1}| and psi is the digamma function (the log-derivative
// of rpi in its second argument).
inline InstantonIntegrals instanton_integrals_closed(int N) {
    idetail::check_dimension_ge5(N, "instanton_integrals");
    const double nd = static_cast<double>(N);
    const double two_star = 2.0 * nd / (nd - 2.0);
    const double log_c0 = 0.25 * (nd - 2.0) * std::log(nd * (nd - 2.0));
    const double log_w = std::log(sphere_area(N));
    const double rpi_n = radial_power_integral(nd - 1.0, nd);
    const double rpi_half = radial_power_integral(nd - 1.0, 0.5 * (nd + 2.0));

    InstantonIntegrals out;
    out.int_U_2star = idetail::log_product({two_star * log_c0, log_w, std::log(rpi_n)});
    out.int_U_2star_minus1 =
        idetail::log_product({(two_star - 1.0) * log_c0, log_w, std::log(rpi_half)});
    out.int_U_lnU = out.int_U_2star *
                    (log_c0 - 0.5 * (nd - 2.0) * (digamma(nd) - digamma(0.5 * nd)));
    out.int_standard_kernel = idetail::log_product({log_w, std::log(rpi_half)});
    return out;
}

// Pure-quadrature evaluation of the same four integrals (radial reduction,
// compactified half-line). Used as the independent oracle.
inline InstantonIntegrals instanton_integrals_quadrature(int N, const QuadratureSpec& q = {}) {
    idetail::check_dimension_ge5(N, "instanton_integrals");
    const double nd = static_cast<double>(N);
    const double two_star = 2.0 * nd / (nd - 2.0);
    const double log_c0 = 0.25 * (nd - 2.0) * std::log(nd * (nd - 2.0));
    const double w = sphere_area(N);
    const QuadOptions opt = to_options(q);
    const std::vector<double> hints{1.0};

    auto mass_2star = [nd](double r) {
        if (r <= 0.0) return 0.0;
        return std::exp((nd - 1.0) * std::log(r) - nd * std::log1p(r * r));
    };
    auto mass_kernel = [nd](double r) {
        if (r <= 0.0) return 0.0;
        return std::exp((nd - 1.0) * std::log(r) - 0.5 * (nd + 2.0) * std::log1p(r * r));
    };
    auto mass_ln = [nd, log_c0](double r) {
        if (r <= 0.0) return 0.0;
        const double l1p = std::log1p(r * r);
        return std::exp((nd - 1.0) * std::log(r) - nd * l1p) *
               (log_c0 - 0.5 * (nd - 2.0) * l1p);
    };

    InstantonIntegrals out;
    const double c0_2star = std::exp(two_star * log_c0);
    out.int_U_2star = c0_2star * w * integrate_to_inf(mass_2star, 0.0, hints, opt).value;
    out.int_U_2star_minus1 = std::exp((two_star - 1.0) * log_c0) * w *
                             integrate_to_inf(mass_kernel, 0.0, hints, opt).value;
    out.int_U_lnU = c0_2star * w * integrate_to_inf(mass_ln, 0.0, hints, opt).value;
    out.int_standard_kernel = w * integrate_to_inf(mass_kernel, 0.0, hints, opt).value;
    return out;
}

// Canonical entry point: closed forms, guarded by an in-call quadrature
// cross-check at a tolerance two orders above the requested one.
inline InstantonIntegrals instanton_integrals(int N, const QuadratureSpec& q = {}) {
    const InstantonIntegrals closed = instanton_integrals_closed(N);
    const InstantonIntegrals quad = instanton_integrals_quadrature(N, q);
    const double tol = 1e3 * q.rel_tol;
    auto close = [tol](double a, double b) {
        return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1.0});
    };
    if (!close(closed.int_U_2star, quad.int_U_2star) ||
        !close(closed.int_U_2star_minus1, quad.int_U_2star_minus1) ||
        !close(closed.int_U_lnU, quad.int_U_lnU) ||
        !close(closed.int_standard_kernel, quad.int_standard_kernel))
        throw std::runtime_error("instanton_integrals: quadrature cross-check failed");
    return closed;
}

// ---------------------------------------------------------------------------
// Hardy-profile integrals (sigma = 1 bubble)
// ---------------------------------------------------------------------------

struct HardyIntegrals {
    double int_V_2star = 0.0;      // int V_1^{2*}           ( = S_mu^{N/2} )
    double int_V_lnV = 0.0;        // int V_1^{2*} ln V_1
    double int_hardy_kernel = 0.0; // int (|z|^{beta1}+|z|^{beta2})^{-(N+2)/2}
};

// Threshold above which the Hardy kernel integral diverges at infinity:
// the tail exponent N-1-beta2(N+2)/2 reaches -1 exactly at
// mu/mu_bar = 8N/(N+2)^2.
inline double hardy_kernel_divergence_ratio(int N) {
    const double nd = static_cast<double>(N);
    return 8.0 * nd / sq(nd + 2.0);
}

inline HardyIntegrals hardy_profile_integrals(const HardyParams& p, const QuadratureSpec& q = {}) {
    idetail::check_dimension_ge5(p.N, "hardy_profile_integrals");
    const double nd = static_cast<double>(p.N);
    const double two_star = 2.0 * nd / (nd - 2.0);
    const double half_nm2 = 0.5 * (nd - 2.0);
    const double log_cmu = std::log(p.c_mu);
    const double w_area = sphere_area(p.N);
    const QuadOptions opt = to_options(q);

    // graded panels toward the r = 0 endpoint (integrand ~ r^{N-1-beta1*N}
    // can have unbounded derivatives there), plus the scale point r = 1
    std::vector<double> hints = graded_hints(0.0, 1.0, q.grading_levels, q.grading_ratio);
    hints.push_back(1.0);

    // ln(r^{beta1} + r^{beta2}) and the 2* mass, both in log form
    auto log_A = [&p](double r) { return p.beta1 * std::log(r) + std::log1p(std::pow(r, 2.0 * p.w)); };

    auto mass_2star = [&](double r) {
        if (r <= 0.0) return 0.0;
        return std::exp((nd - 1.0) * std::log(r) - nd * log_A(r));
    };
    auto mass_ln = [&](double r) {
        if (r <= 0.0) return 0.0;
        const double la = log_A(r);
        return std::exp((nd - 1.0) * std::log(r) - nd * la) * (log_cmu - half_nm2 * la);
    };
    auto mass_kernel = [&](double r) {
        if (r <= 0.0) return 0.0;
        return std::exp((nd - 1.0) * std::log(r) - 0.5 * (nd + 2.0) * log_A(r));
    };

    HardyIntegrals out;
    const double cmu_2star = std::exp(two_star * log_cmu);
    out.int_V_2star = cmu_2star * w_area * integrate_to_inf(mass_2star, 0.0, hints, opt).value;
    out.int_V_lnV = cmu_2star * w_area * integrate_to_inf(mass_ln, 0.0, hints, opt).value;

    if (p.mu / p.mu_bar >= hardy_kernel_divergence_ratio(p.N))
        throw std::domain_error(
            "hardy_profile_integrals: divergent-integral (kernel tail diverges for mu/mu_bar >= 8N/(N+2)^2)");
    out.int_hardy_kernel = w_area * integrate_to_inf(mass_kernel, 0.0, hints, opt).value;
    return out;
}

// ---------------------------------------------------------------------------
// Tower kernels h1, h2
// ---------------------------------------------------------------------------

// h1(rho) = int_{R^N} |y + z|^{2-N} (1+|y|^2)^{-(N+2)/2} dy with |z| = rho.
// Canonical method: the kernel |y+z|^{2-N} is harmonic away from its pole,
// so its spherical average over |y| = r is max(r, rho)^{2-N}; this collapses
// the integral to one dimension with a kink at r = rho.
inline double tower_h1(int N, double rho, const QuadratureSpec& q = {}) {
    idetail::check_dimension_ge5(N, "tower_h1");
    if (!(rho >= 0.0)) throw std::domain_error("tower_h1: rho must be >= 0");
    const double nd = static_cast<double>(N);
    const double w_area = sphere_area(N);
    if (rho == 0.0) return w_area * radial_power_integral(1.0, 0.5 * (nd + 2.0));

    const QuadOptions opt = to_options(q);
    auto f = [nd, rho](double r) {
        if (r <= 0.0) return 0.0;
        const double a = (r >= rho) ? (2.0 - nd) * std::log(r) : (2.0 - nd) * std::log(rho);
        return std::exp((nd - 1.0) * std::log(r) + a - 0.5 * (nd + 2.0) * std::log1p(r * r));
    };
    std::vector<double> hints{rho, 1.0};
    return w_area * integrate_to_inf(f, 0.0, hints, opt).value;
}

// Independent 2D (radius, cosine) evaluation of the same integral, retained
// as the oracle for the mean-value reduction:
//   h1(rho) = |S^{N-2}| int_0^inf int_{-1}^{1} r^{N-1} (1-c^2)^{(N-3)/2}
//               (r^2 + rho^2 + 2 r rho c)^{-(N-2)/2} (1+r^2)^{-(N+2)/2} dc dr.
// The integrable pole sits at (r, c) = (rho, -1); panels are graded toward
// c = -1, with outer breakpoints at r = rho.
inline double tower_h1_2d(int N, double rho, const QuadratureSpec& q = {}) {
    idetail::check_dimension_ge5(N, "tower_h1");
    if (!(rho >= 0.0)) throw std::domain_error("tower_h1: rho must be >= 0");
    const double nd = static_cast<double>(N);
    const double area = sphere_area(N - 1);
    auto f = [nd, rho](double r, double c) {
        if (r <= 0.0) return 0.0;
        const double one_m_c2 = std::max(0.0, 1.0 - c * c);
        if (one_m_c2 == 0.0) return 0.0;  // weight kills the endpoint for N >= 5
        const double d2 = r * r + rho * rho + 2.0 * r * rho * c;
        if (d2 <= 0.0) return 0.0;
        return std::exp((nd - 1.0) * std::log(r) + 0.5 * (nd - 3.0) * std::log(one_m_c2) -
                        0.5 * (nd - 2.0) * std::log(d2) - 0.5 * (nd + 2.0) * std::log1p(r * r));
    };
    return area * idetail::half_line_times_cosine(f, rho, q);
}

// h2(rho) = int_{R^N} |y + z|^{-2} (1+|y|^2)^{-(N-2)} dy with |z| = rho.
// The kernel is not harmonic, so no mean-value shortcut exists; this is a 2D
// axisymmetric quadrature for rho > 0 and a closed Beta form at rho = 0.
inline double tower_h2(int N, double rho, const QuadratureSpec& q = {}) {
    idetail::check_dimension_ge5(N, "tower_h2");
    if (!(rho >= 0.0)) throw std::domain_error("tower_h2: rho must be >= 0");
    const double nd = static_cast<double>(N);
    if (rho == 0.0) return sphere_area(N) * radial_power_integral(nd - 3.0, nd - 2.0);

    const double area = sphere_area(N - 1);
    auto f = [nd, rho](double r, double c) {
        if (r <= 0.0) return 0.0;
        const double one_m_c2 = std::max(0.0, 1.0 - c * c);
        if (one_m_c2 == 0.0) return 0.0;  // weight kills the endpoint for N >= 5
        const double d2 = r * r + rho * rho + 2.0 * r * rho * c;
        if (d2 <= 0.0) return 0.0;
        return std::exp((nd - 1.0) * std::log(r) + 0.5 * (nd - 3.0) * std::log(one_m_c2) -
                        std::log(d2) - (nd - 2.0) * std::log1p(r * r));
    };
    return area * idetail::half_line_times_cosine(f, rho, q);
}

// ---------------------------------------------------------------------------
// Expansion constants
// ---------------------------------------------------------------------------

enum class ExpansionVariant { multipoint, tower };

// Coefficients of the reduced-energy expansion
//   multipoint: I_eps = a1 + a2 eps - a3 eps^alpha - a4 eps ln eps + psi eps + o(eps)
//   tower:      I_eps = a1 + a2 eps - a3 eps ln eps            + psi eps + o(eps)
// (the tower scaling ties the potential term to eps itself, so its a2 absorbs
// the S-bar correction and no separate eps^alpha slot remains; a4 = 0 there).
// b1..b4 are the psi-coefficients of the matching variant; c1 is the
// zeta-independent part of the tower's critical value (zero for multipoint).
struct ExpansionConstants {
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
    double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0;
    double c1 = 0.0;
    ExpansionVariant variant = ExpansionVariant::multipoint;
    int k = 0;
    double mu0 = 0.0;
};

inline ExpansionConstants expansion_constants(int N, double mu0, int k, ExpansionVariant variant,
                                              const QuadratureSpec& q = {}) {
    idetail::check_dimension_ge5(N, "expansion_constants");
    if (!(mu0 > 0.0)) throw std::domain_error("expansion_constants: mu0 must be positive");
    if (variant == ExpansionVariant::multipoint && k < 1)
        throw std::invalid_argument("expansion_constants: multipoint variant requires k >= 1");
    if (variant == ExpansionVariant::tower && k < 0)
        throw std::invalid_argument("expansion_constants: tower variant requires k >= 0");

    const double nd = static_cast<double>(N);
    const double two_star = 2.0 * nd / (nd - 2.0);
    const double c0 = instanton_constant(N);
    const InstantonIntegrals ii = instanton_integrals(N, q);
    const double s0_pow = ii.int_U_2star;                        // S0^{N/2}
    const double s0_pow_nm2 = std::exp(((nd - 2.0) / nd) * std::log(s0_pow));  // S0^{(N-2)/2}
    const double s_bar = sobolev_constants(N, 0.0).s_bar;
    const double kp1 = static_cast<double>(k + 1);

    ExpansionConstants ec;
    ec.variant = variant;
    ec.k = k;
    ec.mu0 = mu0;
    ec.a1 = kp1 * s0_pow / nd;
    ec.b1 = 0.5 * c0 * ii.int_U_2star_minus1;
    ec.b3 = 0.5 * c0 * c0 * mu0;
    ec.b4 = s0_pow / two_star;

    if (variant == ExpansionVariant::multipoint) {
        ec.a2 = kp1 / two_star * ii.int_U_lnU - kp1 / sq(two_star) * s0_pow;
        ec.a3 = 0.5 * s0_pow_nm2 * s_bar * mu0;
        ec.a4 = kp1 / (2.0 * two_star) * s0_pow;
        ec.b2 = s0_pow / two_star;
        ec.c1 = 0.0;
    } else {
        ec.a2 = kp1 / two_star * ii.int_U_lnU - kp1 / sq(two_star) * s0_pow -
                0.5 * s0_pow_nm2 * s_bar * mu0;
        ec.a3 = sq(kp1) / (2.0 * two_star) * s0_pow;
        ec.a4 = 0.0;
        ec.b2 = std::exp(two_star * std::log(c0));
        // zeta-independent part of the critical value of the tower psi
        KahanSum c1;
        c1.add(0.5 * sq(kp1) * ec.b4);
        c1.add(-ec.b4 * 0.5 * kp1 * std::log(kp1 * ec.b4 / (2.0 * ec.b1)));
        for (int i = 1; i <= k; ++i)
            c1.add(-ec.b4 * static_cast<double>(i) * std::log(static_cast<double>(i) * ec.b4 / ec.b2));
        ec.c1 = c1.value();
    }
    return ec;
}

}  // namespace bubblereduce
