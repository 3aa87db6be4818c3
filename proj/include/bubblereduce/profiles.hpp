#pragma once

// Bubble-profile layer: the two limiting profiles of the reduced-energy
// machinery — the standard instanton
//     U_{delta,xi}(x) = C0 (delta / (delta^2 + |x - xi|^2))^{(N-2)/2}
// and the Hardy-modified bubble
//     V_sigma(x) = C_mu (sigma / (sigma^2 |x|^{beta1} + |x|^{beta2}))^{(N-2)/2},
// together with their dimensional constants and the Sobolev constants
// (S0, S_mu, and the first-order mu-slope S-bar) attached to them.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "common.hpp"
#include "quadrature.hpp"

namespace bubblereduce {

// C0 = (N(N-2))^{(N-2)/4}, evaluated in log space so large N stays exact
// to rounding instead of overflowing intermediate powers.
inline double instanton_constant(int N) {
    if (N < 5) throw std::invalid_argument("instanton_constant: dimension-too-small (N >= 5 required)");
    const double nd = static_cast<double>(N);
    return std::exp(0.25 * (nd - 2.0) * std::log(nd * (nd - 2.0)));
}

// Parameter bundle for the Hardy-modified bubble. mu_bar = (N-2)^2/4 is the
// critical coefficient of the inverse-square potential: the profile family
// exists exactly for 0 <= mu < mu_bar. The exponents satisfy
// beta1 + beta2 = 2 and beta1 * beta2 * mu_bar = mu; w = beta2 - 1 =
// sqrt(1 - mu/mu_bar) is kept because most closed forms are stated in it.
struct HardyParams {
    int N = 0;
    double mu = 0.0;
    double mu_bar = 0.0;
    double w = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double c_mu = 0.0;
    double c0 = 0.0;
};

inline HardyParams hardy_params(int N, double mu) {
    if (N < 5) throw std::invalid_argument("hardy_params: dimension-too-small (N >= 5 required)");
    const double nd = static_cast<double>(N);
    const double mu_bar = 0.25 * sq(nd - 2.0);
    if (!(mu >= 0.0) || !(mu < mu_bar))
        throw std::domain_error("hardy_params: mu-out-of-range (requires 0 <= mu < (N-2)^2/4)");
    HardyParams p;
    p.N = N;
    p.mu = mu;
    p.mu_bar = mu_bar;
    const double ratio = mu / mu_bar;
    p.w = std::sqrt(1.0 - ratio);
    // beta1 = 1 - w rewritten as ratio/(1+w): no cancellation for small mu,
    // and it makes beta1 * beta2 * mu_bar = mu hold to rounding.
    p.beta1 = ratio / (1.0 + p.w);
    p.beta2 = 1.0 + p.w;
    p.c0 = instanton_constant(N);
    // c_mu = (N(N-2)(1 - mu/mu_bar))^{(N-2)/4} = (4N(mu_bar - mu)/(N-2))^{(N-2)/4}.
    p.c_mu = std::exp(0.25 * (nd - 2.0) * std::log(nd * (nd - 2.0) * (1.0 - ratio)));
    return p;
}

// U_{delta,0}(r) for radial arguments; the full-point overload reduces to it.
inline double standard_bubble_radial(int N, double delta, double r) {
    if (N < 5) throw std::invalid_argument("standard_bubble: dimension-too-small (N >= 5 required)");
    if (!(delta > 0.0)) throw std::domain_error("standard_bubble: nonpositive delta");
    const double p = 0.5 * (N - 2);
    return instanton_constant(N) * std::exp(p * (std::log(delta) - std::log(delta * delta + r * r)));
}

inline double standard_bubble(int N, double delta, const std::vector<double>& xi,
                              const std::vector<double>& x) {
    if (N < 5) throw std::invalid_argument("standard_bubble: dimension-too-small (N >= 5 required)");
    if (!(delta > 0.0)) throw std::domain_error("standard_bubble: nonpositive delta");
    const double p = 0.5 * (N - 2);
    return instanton_constant(N) *
           std::exp(p * (std::log(delta) - std::log(delta * delta + dist2(x, xi))));
}

// V_sigma(r). At mu = 0 the exponents collapse (beta1 = 0, beta2 = 2) and the
// formula is the standard bubble centred at the origin, finite at r = 0; for
// mu > 0 the origin is a genuine singularity of the profile and is rejected.
inline double hardy_bubble_radial(const HardyParams& p, double sigma, double r) {
    if (!(sigma > 0.0)) throw std::domain_error("hardy_bubble: nonpositive sigma");
    if (!(r >= 0.0)) throw std::domain_error("hardy_bubble: negative radius");
    if (r == 0.0) {
        if (p.mu > 0.0)
            throw std::domain_error("hardy_bubble: evaluation at x = 0 is singular for mu > 0");
        return standard_bubble_radial(p.N, sigma, 0.0);
    }
    const double half = 0.5 * (p.N - 2);
    const double denom = sigma * sigma * std::pow(r, p.beta1) + std::pow(r, p.beta2);
    return p.c_mu * std::exp(half * (std::log(sigma) - std::log(denom)));
}

inline double hardy_bubble(const HardyParams& p, double sigma, const std::vector<double>& x) {
    return hardy_bubble_radial(p, sigma, norm(x));
}

// Sobolev constants of the two profiles:
//   s0:   S0 with S0^{N/2} = int U_{1,0}^{2*}        (closed Beta form)
//   s_mu: S_mu with S_mu^{N/2} = int V_1^{2*}        (radial quadrature)
//   s_bar: the first-order slope in S_mu = S0 - S_bar * mu + O(mu^2),
//          estimated by one-sided differences at h and 2h from mu = 0 with
//          one Richardson step (h = 1e-4 * mu_bar).
struct SobolevConstants {
    double s0 = 0.0;
    double s_mu = 0.0;
    double s_bar = 0.0;
};

namespace pdetail {

// int_0^inf r^{N-1} (r^{beta1} + r^{beta2})^{-N} dr by adaptive quadrature
// on the compactified half-line. Only the exponent gap 2w enters:
// the integrand is r^{N-1-N*beta1} (1 + r^{2w})^{-N} in log form.
inline double hardy_radial_mass(const HardyParams& p, const QuadOptions& opt) {
    const double a = (p.N - 1) - p.N * p.beta1;
    const double two_w = 2.0 * p.w;
    const double nd = static_cast<double>(p.N);
    auto f = [a, two_w, nd](double r) {
        if (r <= 0.0) return 0.0;
        return std::exp(a * std::log(r) - nd * std::log1p(std::pow(r, two_w)));
    };
    std::vector<double> hints = graded_hints(0.0, 1.0, 40, 0.5);
    hints.push_back(1.0);
    return integrate_to_inf(f, 0.0, hints, opt).value;
}

inline double s_mu_value(int N, double mu, const QuadOptions& opt) {
    const HardyParams p = hardy_params(N, mu);
    const double nd = static_cast<double>(N);
    const double two_star = 2.0 * nd / (nd - 2.0);
    const double log_mass = two_star * std::log(p.c_mu) + std::log(sphere_area(N)) +
                            std::log(hardy_radial_mass(p, opt));
    return std::exp((2.0 / nd) * log_mass);
}

}  // namespace pdetail

inline SobolevConstants sobolev_constants(int N, double mu) {
    const HardyParams p = hardy_params(N, mu);  // validates N, mu
    const double nd = static_cast<double>(N);
    const double two_star = 2.0 * nd / (nd - 2.0);

    QuadOptions opt;
    opt.rel_tol = 1e-13;
    opt.abs_tol = 1e-300;

    SobolevConstants out;
    const double log_s0_pow = two_star * std::log(p.c0) + std::log(sphere_area(N)) +
                              std::log(radial_power_integral(nd - 1.0, nd));
    out.s0 = std::exp((2.0 / nd) * log_s0_pow);
    out.s_mu = pdetail::s_mu_value(N, mu, opt);

    const double h = 1e-4 * p.mu_bar;
    const double slope_h = (out.s0 - pdetail::s_mu_value(N, h, opt)) / h;
    const double slope_2h = (out.s0 - pdetail::s_mu_value(N, 2.0 * h, opt)) / (2.0 * h);
    out.s_bar = 2.0 * slope_h - slope_2h;
    return out;
}

}  // namespace bubblereduce
