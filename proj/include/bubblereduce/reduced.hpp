// Reduced energy of multi-bubble configurations in the unit ball.
//
// The finite-dimensional functional assigns to a set of interior points
// xi_1..xi_n with signs c_1..c_n and concentration scales lambda_1..lambda_n
// the interaction energy
//
//   psi(lambda) = b1 [ sum_i H(xi_i, xi_i) lambda_i^{N-2}
//                      - 2 sum_{i<j} c_i c_j G(xi_i, xi_j) lambda_i^p lambda_j^p ]
//                 - b2 ln (lambda_1 ... lambda_n)^p,        p = (N-2)/2,
//
// where H and G are the regular part and the Green function of the ball and
// b1, b2 come from expansion_constants (multipoint variant).  Critical points
// of psi in lambda select the concentration scales of the configurations
// studied here.  Besides the generic evaluator this header provides:
//
//  * closed-form balanced critical scales for a symmetric ring of k
//    equal-sign bubbles plus an opposite-sign bubble at the center
//    (k = 1..4), together with the radial profile value nu(t), its
//    t-derivative, and the sign function iota whose roots locate interior
//    critical radii;
//  * the alternating-sign square-plus-center configuration, whose critical
//    scales split into three groups (center, odd ring, even ring) and exist
//    on two disjoint radius windows;
//  * the tower functional in ratio variables s_i, with exact critical ratios
//    and the decomposition of the critical value into a configuration
//    constant plus per-level radial terms.
//
// All closed forms are cross-checked against the generic evaluator and
// against finite differences in the test suite.

#ifndef BUBBLEREDUCE_REDUCED_HPP
#define BUBBLEREDUCE_REDUCED_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ball.hpp"
#include "common.hpp"
#include "integrals.hpp"
#include "rootfind.hpp"

namespace bubblereduce {

// ---------------------------------------------------------------------------
// Generic multipoint functional
// ---------------------------------------------------------------------------

struct PointConfig {
    std::vector<std::vector<double>> points;  // interior points of the unit ball
    std::vector<int> signs;                   // +1 or -1 per point
};

// A ring of k points at radius t in the (x1, x2)-plane plus the center.
// With alternating = false every ring bubble carries sign -1 and the center
// +1; with alternating = true the ring signs alternate -1, +1, -1, ...
inline PointConfig ring_center_config(int N, int k, double t, bool alternating) {
    bdetail::check_dimension(N, "ring_center_config");
    if (k < 1) throw std::invalid_argument("ring_center_config: k must be >= 1");
    bdetail::check_interior_t(t, "ring_center_config");
    PointConfig cfg;
    cfg.points = ring_placement(k, t, N);
    cfg.points.push_back(std::vector<double>(static_cast<std::size_t>(N), 0.0));
    cfg.signs.assign(static_cast<std::size_t>(k) + 1, -1);
    if (alternating) {
        for (int i = 1; i <= k; ++i) cfg.signs[static_cast<std::size_t>(i - 1)] = (i % 2 == 1) ? -1 : +1;
    }
    cfg.signs.back() = +1;
    return cfg;
}

struct PsiEval {
    double value = 0.0;
    std::vector<double> grad;
    Matrix hess;
};

// Value, gradient, and Hessian of psi in the scales lambda (all > 0).
inline PsiEval psi_multipoint(int N, const ExpansionConstants& ec, const PointConfig& cfg,
                              const std::vector<double>& lambda) {
    bdetail::check_dimension(N, "psi_multipoint");
    if (ec.variant != ExpansionVariant::multipoint)
        throw std::invalid_argument("psi_multipoint: constants must use the multipoint variant");
    const std::size_t n = cfg.points.size();
    if (n == 0) throw std::invalid_argument("psi_multipoint: empty configuration");
    if (cfg.signs.size() != n || lambda.size() != n)
        throw std::invalid_argument("psi_multipoint: size mismatch");
    for (int s : cfg.signs)
        if (s != 1 && s != -1) throw std::invalid_argument("psi_multipoint: signs must be +1 or -1");
    for (double l : lambda)
        if (!(l > 0.0)) throw std::domain_error("psi_multipoint: scales must be positive");

    const double p = 0.5 * (N - 2.0);
    // Pairwise coefficients: e_ij = -c_i c_j G(xi_i, xi_j) enters psi with
    // weight 2 lambda_i^p lambda_j^p; same-sign pairs repel (-G), opposite
    // signs attract (+G).
    std::vector<double> hdiag(n);
    Matrix e(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        hdiag[i] = regular_part(N, cfg.points[i], cfg.points[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double g = green(N, cfg.points[i], cfg.points[j]);
            e[i][j] = e[j][i] = -static_cast<double>(cfg.signs[i] * cfg.signs[j]) * g;
        }
    }

    std::vector<double> lp(n), lp1(n);  // lambda^p and lambda^{p-1}
    for (std::size_t i = 0; i < n; ++i) {
        lp[i] = std::pow(lambda[i], p);
        lp1[i] = std::pow(lambda[i], p - 1.0);
    }

    PsiEval out;
    out.grad.assign(n, 0.0);
    out.hess.assign(n, std::vector<double>(n, 0.0));
    KahanSum val;
    for (std::size_t i = 0; i < n; ++i) {
        const double cross = [&] {
            KahanSum s;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) s.add(e[i][j] * lp[j]);
            return s.value();
        }();
        val.add(ec.b1 * hdiag[i] * lp[i] * lp[i]);
        val.add(ec.b1 * lp[i] * cross);  // the 2 sum_{i<j} double-counts once per i
        val.add(-ec.b2 * p * std::log(lambda[i]));
        out.grad[i] = ec.b1 * (2.0 * p * hdiag[i] * lp[i] * lp[i] / lambda[i] +
                               2.0 * p * lp1[i] * cross) -
                      ec.b2 * p / lambda[i];
        out.hess[i][i] = ec.b1 * (2.0 * p * (2.0 * p - 1.0) * hdiag[i] * lp[i] * lp[i] /
                                      (lambda[i] * lambda[i]) +
                                  2.0 * p * (p - 1.0) * lp1[i] / lambda[i] * cross) +
                         ec.b2 * p / (lambda[i] * lambda[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            out.hess[i][j] = out.hess[j][i] = 2.0 * ec.b1 * p * p * lp1[i] * lp1[j] * e[i][j];
        }
    }
    out.value = val.value();
    return out;
}

// ---------------------------------------------------------------------------
// Balanced ring-plus-center profiles (k = 1..4, equal ring scales)
// ---------------------------------------------------------------------------

// Effective ring self-coefficient: the regular part at a ring point minus the
// Green-function couplings to the other ring points, which for equal-sign
// ring bubbles all enter with weight -1.
//   k = 1: (1-t^2)^{2-N}                          (no ring partners)
//   k = 2: antipodal pair                          -> gamma3
//   k = 3: equilateral triangle                    -> gamma1
//   k = 4: square (two neighbors plus diagonal)    -> gamma2
inline double ring_gamma(int N, int k, double t) {
    bdetail::check_dimension(N, "ring_gamma");
    bdetail::check_interior_t(t, "ring_gamma");
    switch (k) {
        case 1: return std::exp(-(N - 2.0) * std::log1p(-t * t));
        case 2: return gamma3(N, t);
        case 3: return gamma1(N, t);
        case 4: return gamma2(N, t);
        default: throw std::invalid_argument("ring_gamma: k must be in 1..4");
    }
}

inline double ring_gamma_prime(int N, int k, double t) {
    bdetail::check_dimension(N, "ring_gamma_prime");
    bdetail::check_interior_t(t, "ring_gamma_prime");
    switch (k) {
        case 1:
            return (N - 2.0) * 2.0 * t * std::exp(-(N - 1.0) * std::log1p(-t * t));
        case 2: return gamma3_prime(N, t);
        case 3: return gamma1_prime(N, t);
        case 4: return gamma2_prime(N, t);
        default: throw std::invalid_argument("ring_gamma_prime: k must be in 1..4");
    }
}

// Sign function whose positivity/roots control the radial profile:
// iota_k(t) = gamma_k'(t) + 2 alpha_k(t) tau1'(t), where alpha_k solves
// alpha^2 + (k-1) tau1 alpha - gamma_k = 0 (positive branch).  Returns NaN
// when the branch is not real at this radius.
inline double ring_iota(int N, int k, double t) {
    const double g = ring_gamma(N, k, t);
    const AlphaBeta ab = alpha_beta(1.0, tau1(N, t), g, k - 1);
    if (std::isnan(ab.alpha)) return std::numeric_limits<double>::quiet_NaN();
    return ring_gamma_prime(N, k, t) + 2.0 * ab.alpha * tau1_prime(N, t);
}

struct ProfileCritical {
    int k = 0;
    double t = 0.0;
    double gamma = 0.0, gamma_prime = 0.0;  // ring self-coefficient and d/dt
    double tau = 0.0, tau_prime = 0.0;      // ring-center coupling and d/dt
    double alpha = std::numeric_limits<double>::quiet_NaN();  // (lambda_c / lambda_r)^p
    double beta = std::numeric_limits<double>::quiet_NaN();   // gamma + tau alpha
    double x = std::numeric_limits<double>::quiet_NaN();      // lambda_ring^p
    double y = std::numeric_limits<double>::quiet_NaN();      // lambda_center^p
    double lambda_ring = std::numeric_limits<double>::quiet_NaN();
    double lambda_center = std::numeric_limits<double>::quiet_NaN();
    double iota = std::numeric_limits<double>::quiet_NaN();
    double value = std::numeric_limits<double>::quiet_NaN();   // nu(t)
    double dvalue = std::numeric_limits<double>::quiet_NaN();  // nu'(t) = k b1 x^2 iota
    Matrix hessian;  // 2x2 in (lambda_ring, lambda_center), at the critical scales
    bool admissible = false;
};

// Balanced critical scales at ring radius t.  Stationarity in the two scale
// groups reads (x = lambda_ring^p, y = lambda_center^p, q = b2 / (2 b1)):
//    gamma x^2 + tau x y        = q        (any ring bubble)
//    y^2       + k tau x y      = q        (center bubble)
// Subtracting gives alpha = y/x as the positive root of
// alpha^2 + (k-1) tau alpha - gamma = 0, then x^2 = q / (gamma + tau alpha).
// The profile value is nu(t) = (k+1)/2 b2 - b2 ln(x^k y) and its radial
// derivative collapses to k b1 x^2 iota_k(t).
inline ProfileCritical ring_profile(int N, const ExpansionConstants& ec, int k, double t) {
    bdetail::check_dimension(N, "ring_profile");
    if (ec.variant != ExpansionVariant::multipoint)
        throw std::invalid_argument("ring_profile: constants must use the multipoint variant");
    if (k < 1 || k > 4) throw std::invalid_argument("ring_profile: k must be in 1..4");
    bdetail::check_interior_t(t, "ring_profile");

    ProfileCritical pc;
    pc.k = k;
    pc.t = t;
    pc.gamma = ring_gamma(N, k, t);
    pc.gamma_prime = ring_gamma_prime(N, k, t);
    pc.tau = tau1(N, t);
    pc.tau_prime = tau1_prime(N, t);

    const AlphaBeta ab = alpha_beta(1.0, pc.tau, pc.gamma, k - 1);
    pc.alpha = ab.alpha;
    pc.beta = ab.beta;
    if (std::isnan(ab.alpha) || !(ab.alpha > 0.0) || !(ab.beta > 0.0)) return pc;  // not admissible

    pc.iota = pc.gamma_prime + 2.0 * ab.alpha * pc.tau_prime;
    const double q = ec.b2 / (2.0 * ec.b1);
    const double p = 0.5 * (N - 2.0);
    pc.x = std::sqrt(q / ab.beta);
    pc.y = ab.alpha * pc.x;
    pc.lambda_ring = std::exp(std::log(pc.x) / p);
    pc.lambda_center = std::exp(std::log(pc.y) / p);
    pc.value = 0.5 * (k + 1.0) * ec.b2 - ec.b2 * (k * std::log(pc.x) + std::log(pc.y));
    pc.dvalue = k * ec.b1 * pc.x * pc.x * pc.iota;

    // Reduced 2x2 Hessian in (lambda_ring, lambda_center) at the critical
    // scales, after eliminating the stationarity relations.
    const double lr = pc.lambda_ring, lc = pc.lambda_center;
    const double nm2 = N - 2.0;
    Matrix h(2, std::vector<double>(2, 0.0));
    h[0][0] = k * nm2 * ec.b1 *
              (nm2 * pc.gamma * std::pow(lr, N - 4.0) +
               0.5 * nm2 * pc.tau * std::pow(lr, 0.5 * (N - 6.0)) * std::pow(lc, p));
    h[1][1] = nm2 * ec.b1 *
              (nm2 * std::pow(lc, N - 4.0) +
               0.5 * k * nm2 * pc.tau * std::pow(lr, p) * std::pow(lc, 0.5 * (N - 6.0)));
    h[0][1] = h[1][0] =
        0.5 * k * nm2 * nm2 * ec.b1 * pc.tau * std::pow(lr, 0.5 * (N - 4.0)) * std::pow(lc, 0.5 * (N - 4.0));
    pc.hessian = std::move(h);
    pc.admissible = true;
    return pc;
}

// Smallest radius at which the ring self-coefficient gamma_k changes sign
// (k >= 2; for k = 1 it is positive on all of (0,1)).  Below the root the
// balanced configuration has no positive critical scales.
inline RootReport ring_t_star(int N, int k) {
    if (k < 2 || k > 4) throw std::invalid_argument("ring_t_star: k must be in 2..4");
    auto f = [&](double t) { return ring_gamma(N, k, t); };
    const auto brackets = scan_sign(f, 0.02, 0.98, 600);
    if (brackets.empty()) throw std::runtime_error("ring_t_star: no sign change located");
    return refine_root(f, brackets.front(), 1e-15);
}

// Roots of iota_k on the admissible window (t_star, 1), located on a uniform
// grid of n_grid points and Brent-refined.  NaN stretches (no real branch)
// are skipped by the scanner.
inline std::vector<RootReport> ring_iota_roots(int N, int k, int n_grid = 10000) {
    const double lo = (k >= 2) ? ring_t_star(N, k).root * (1.0 + 1e-12) + 1e-12 : 1e-4;
    const double hi = 1.0 - 1e-6;
    auto f = [&](double t) { return ring_iota(N, k, t); };
    std::vector<RootReport> roots;
    for (const Bracket& br : scan_sign(f, lo, hi, n_grid)) roots.push_back(refine_root(f, br, 1e-15));
    return roots;
}

// Sufficient positivity margin for the square ring (k = 4): with
// T = t^2 / (1 - t^2), the quantity (T^N + 3T)(1 - t^{N-2})^2 - 1 being
// positive on the admissible window guarantees iota_4 > 0 there.
inline double square_margin(int N, double t) {
    bdetail::check_dimension(N, "square_margin");
    bdetail::check_interior_t(t, "square_margin");
    const double T = t * t / (1.0 - t * t);
    const double tn = std::exp(N * std::log(T));
    const double d = 1.0 - std::exp((N - 2.0) * std::log(t));
    return (tn + 3.0 * T) * d * d - 1.0;
}

// Newton refinement of the full scale vector (ring scales free, not tied)
// from a perturbed start, using the analytic gradient and Hessian of psi.
// Converges back to equal ring scales when started near the balanced
// critical point.
inline NewtonReport polish_ring_critical(int N, const ExpansionConstants& ec, int k, double t,
                                         std::vector<double> lambda0, const NewtonOptions& opt = {}) {
    const PointConfig cfg = ring_center_config(N, k, t, false);
    if (lambda0.size() != cfg.points.size())
        throw std::invalid_argument("polish_ring_critical: start vector has wrong size");
    auto fj = [&](const std::vector<double>& l) -> std::pair<std::vector<double>, Matrix> {
        try {
            PsiEval ev = psi_multipoint(N, ec, cfg, l);
            return {std::move(ev.grad), std::move(ev.hess)};
        } catch (const std::domain_error&) {
            // Out-of-domain trial step (non-positive scale): report an
            // infinite residual so the line search backtracks.
            const std::size_t n = l.size();
            std::vector<double> f(n, std::numeric_limits<double>::infinity());
            Matrix j(n, std::vector<double>(n, 0.0));
            for (std::size_t i = 0; i < n; ++i) j[i][i] = 1.0;
            return {std::move(f), std::move(j)};
        }
    };
    return newton_nd(fj, std::move(lambda0), opt);
}

// ---------------------------------------------------------------------------
// Alternating-sign square plus center
// ---------------------------------------------------------------------------

// Closed-form sign polynomial for the alternating square: a root of
//   iota_alt = g3' (2 g3 (g3 - 2 tau^2) + tau^2 (g3 + 2 g4))
//              - 2 tau' tau g3 (g3 + 2 g4) + 4 g4' g3 (g3 - 2 tau^2)
// marks an interior critical radius of the alternating profile; the profile
// derivative equals b2 * iota_alt / (g3 (g3 - 2 tau^2) (g3 + 2 g4)), whose
// denominator is positive on both admissibility windows.
inline double alternating_iota(int N, double t) {
    const double g3 = gamma3(N, t), g3p = gamma3_prime(N, t);
    const double g4 = gamma4(N, t), g4p = gamma4_prime(N, t);
    const double ta = tau1(N, t), tap = tau1_prime(N, t);
    const double d1 = g3 - 2.0 * ta * ta;
    const double d2 = g3 + 2.0 * g4;
    return g3p * (2.0 * g3 * d1 + ta * ta * d2) - 2.0 * tap * ta * g3 * d2 + 4.0 * g4p * g3 * d1;
}

// Radius windows on which the alternating square-plus-center configuration
// has positive critical scales: (0, t1) with t1 the root of gamma3, and
// (t2, 1) with t2 the root of gamma3 - 2 tau1^2.
inline std::pair<double, double> alternating_windows(int N) {
    auto f1 = [&](double t) { return gamma3(N, t); };
    const auto br1 = scan_sign(f1, 0.02, 0.98, 600);
    if (br1.empty()) throw std::runtime_error("alternating_windows: gamma3 root not located");
    const double t1 = refine_root(f1, br1.front(), 1e-15).root;
    auto f2 = [&](double t) { return gamma3(N, t) - 2.0 * sq(tau1(N, t)); };
    const auto br2 = scan_sign(f2, t1 * (1.0 + 1e-9), 0.999, 600);
    if (br2.empty()) throw std::runtime_error("alternating_windows: upper window edge not located");
    const double t2 = refine_root(f2, br2.front(), 1e-15).root;
    return {t1, t2};
}

struct AlternatingCritical {
    double t = 0.0;
    double g3 = 0.0, g4 = 0.0, tau = 0.0;     // couplings at this radius
    double g3p = 0.0, g4p = 0.0, taup = 0.0;  // their derivatives
    double X = std::numeric_limits<double>::quiet_NaN();  // lambda_center^p
    double Y = std::numeric_limits<double>::quiet_NaN();  // lambda_odd^p
    double Z = std::numeric_limits<double>::quiet_NaN();  // lambda_even^p
    double lambda_center = std::numeric_limits<double>::quiet_NaN();
    double lambda_odd = std::numeric_limits<double>::quiet_NaN();
    double lambda_even = std::numeric_limits<double>::quiet_NaN();
    double iota = 0.0;
    double value = std::numeric_limits<double>::quiet_NaN();
    double dvalue = std::numeric_limits<double>::quiet_NaN();
    std::array<double, 3> residuals{};  // stationarity equations, relative to q
    Matrix stability;                   // 3x3 scale-stability matrix
    double det = std::numeric_limits<double>::quiet_NaN();
    bool admissible = false;
};

// Critical scales of the alternating square plus center.  Stationarity in
// the three groups (X = lambda_center^p, Y = odd ring, Z = even ring) reads
//    X^2   + 2 tau (Y - Z) X            = q
//    g3 Y^2 + tau Y X + 2 g4 Y Z        = q
//    g3 Z^2 - tau Z X + 2 g4 Y Z        = q
// which collapse to Z - Y = (tau / g3) X, X^2 = q g3 / (g3 - 2 tau^2),
// Y Z = q / (g3 + 2 g4); Y and Z are recovered from their sum/product
// quadratic with the stable conjugate branch.
inline AlternatingCritical alternating_profile(int N, const ExpansionConstants& ec, double t) {
    bdetail::check_dimension(N, "alternating_profile");
    if (ec.variant != ExpansionVariant::multipoint)
        throw std::invalid_argument("alternating_profile: constants must use the multipoint variant");
    bdetail::check_interior_t(t, "alternating_profile");

    AlternatingCritical ac;
    ac.t = t;
    ac.g3 = gamma3(N, t);
    ac.g4 = gamma4(N, t);
    ac.tau = tau1(N, t);
    ac.g3p = gamma3_prime(N, t);
    ac.g4p = gamma4_prime(N, t);
    ac.taup = tau1_prime(N, t);
    ac.iota = alternating_iota(N, t);

    const double d1 = ac.g3 - 2.0 * ac.tau * ac.tau;
    const double d2 = ac.g3 + 2.0 * ac.g4;
    const double q = ec.b2 / (2.0 * ec.b1);
    if (ac.g3 == 0.0 || !(ac.g3 * d1 > 0.0) || !(d2 > 0.0)) return ac;  // not admissible

    const double p = 0.5 * (N - 2.0);
    ac.X = std::sqrt(q * ac.g3 / d1);
    const double S = ac.tau * ac.X / ac.g3;  // Z - Y
    const double P = q / d2;                 // Y Z
    ac.Z = 0.5 * (S + std::sqrt(S * S + 4.0 * P));
    ac.Y = P / ac.Z;
    ac.lambda_center = std::exp(std::log(ac.X) / p);
    ac.lambda_odd = std::exp(std::log(ac.Y) / p);
    ac.lambda_even = std::exp(std::log(ac.Z) / p);

    ac.value = 2.5 * ec.b2 - ec.b2 * (2.0 * std::log(ac.Y) + 2.0 * std::log(ac.Z) + std::log(ac.X));
    ac.dvalue = 2.0 * ec.b1 *
                (ac.g3p * (ac.Y * ac.Y + ac.Z * ac.Z) + 2.0 * ac.taup * (ac.Y - ac.Z) * ac.X +
                 4.0 * ac.g4p * ac.Y * ac.Z);

    ac.residuals[0] = (ac.X * ac.X + 2.0 * ac.tau * (ac.Y - ac.Z) * ac.X - q) / q;
    ac.residuals[1] =
        (ac.g3 * ac.Y * ac.Y + ac.tau * ac.Y * ac.X + 2.0 * ac.g4 * ac.Y * ac.Z - q) / q;
    ac.residuals[2] =
        (ac.g3 * ac.Z * ac.Z - ac.tau * ac.Z * ac.X + 2.0 * ac.g4 * ac.Y * ac.Z - q) / q;

    // Scale-stability matrix in the group variables (X, Y, Z); its
    // determinant carries the sign of g3 across both windows.
    const double e1 = 2.0 / (N - 2.0);
    const double e2 = (N - 4.0) / (N - 2.0);
    Matrix m(3, std::vector<double>(3, 0.0));
    m[0][0] = 0.5 * ac.X + 0.5 * q / ac.X;
    m[0][1] = ac.tau * std::pow(ac.Y, e1) * std::pow(ac.X, e2);
    m[0][2] = -ac.tau * std::pow(ac.Z, e1) * std::pow(ac.X, e2);
    m[1][0] = ac.tau * std::pow(ac.Y, e2) * std::pow(ac.X, e1);
    m[1][1] = ac.g3 * ac.Y + q / ac.Y;
    m[1][2] = 2.0 * ac.g4 * std::pow(ac.Y, e2) * std::pow(ac.Z, e1);
    m[2][0] = -ac.tau * std::pow(ac.Z, e2) * std::pow(ac.X, e1);
    m[2][1] = 2.0 * ac.g4 * std::pow(ac.Y, e1) * std::pow(ac.Z, e2);
    m[2][2] = ac.g3 * ac.Z + q / ac.Z;
    ac.det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    ac.stability = std::move(m);
    ac.admissible = true;
    return ac;
}

// Roots of the alternating sign polynomial on one of the two admissibility
// windows (which = 0 scans (0, t1), which = 1 scans (t2, 1)).
inline std::vector<RootReport> alternating_iota_roots(int N, int which, int n_grid = 10000) {
    const auto win = alternating_windows(N);
    double lo = 1e-4, hi = win.first * (1.0 - 1e-12) - 1e-12;
    if (which == 1) {
        lo = win.second * (1.0 + 1e-12) + 1e-12;
        hi = 1.0 - 1e-6;
    } else if (which != 0) {
        throw std::invalid_argument("alternating_iota_roots: which must be 0 or 1");
    }
    auto f = [&](double t) { return alternating_iota(N, t); };
    std::vector<RootReport> roots;
    for (const Bracket& br : scan_sign(f, lo, hi, n_grid)) roots.push_back(refine_root(f, br, 1e-15));
    return roots;
}

// ---------------------------------------------------------------------------
// Tower functional
// ---------------------------------------------------------------------------

// Radial kernels h1, h2 evaluated at the offsets |zeta_i| of a k-level
// tower.  The second kernel only shifts the functional by a scale-independent
// constant, so callers that need gradients or Hessians in the scales alone
// may skip its (2D, comparatively slow) quadrature with with_h2 = false.
struct TowerKernels {
    std::vector<double> rho;
    std::vector<double> h1;
    std::vector<double> h2;
};

inline TowerKernels tower_kernels(int N, const std::vector<double>& rhos, bool with_h2 = true,
                                  const QuadratureSpec& q = {}) {
    TowerKernels tk;
    tk.rho = rhos;
    tk.h1.reserve(rhos.size());
    tk.h2.reserve(rhos.size());
    for (double r : rhos) {
        tk.h1.push_back(tower_h1(N, r, q));
        tk.h2.push_back(with_h2 ? tower_h2(N, r, q) : 0.0);
    }
    return tk;
}

namespace rdetail2 {
inline void check_tower(const ExpansionConstants& ec, const TowerKernels& tk, const char* who) {
    if (ec.variant != ExpansionVariant::tower)
        throw std::invalid_argument(std::string(who) + ": constants must use the tower variant");
    if (tk.h1.size() != static_cast<std::size_t>(ec.k) || tk.h2.size() != tk.h1.size())
        throw std::invalid_argument(std::string(who) + ": kernel count must equal the level count");
}
}  // namespace rdetail2

// Tower functional in ratio variables s_1 = lambda_1^p,
// s_{i+1} = (lambda_{i+1} / lambda_i)^p:
//   psi_hat(s) = b1 s_1^2 + sum_i b2 s_{i+1} h1_i - sum_i b3 h2_i
//                - b4 [ (k+1) ln s_1 + sum_i (k+1-i) ln s_{i+1} ].
inline double tower_psi_hat(const ExpansionConstants& ec, const std::vector<double>& s,
                            const TowerKernels& tk) {
    rdetail2::check_tower(ec, tk, "tower_psi_hat");
    if (s.size() != static_cast<std::size_t>(ec.k) + 1)
        throw std::invalid_argument("tower_psi_hat: need k+1 ratio variables");
    for (double si : s)
        if (!(si > 0.0)) throw std::domain_error("tower_psi_hat: ratios must be positive");
    KahanSum v;
    v.add(ec.b1 * s[0] * s[0]);
    v.add(-ec.b4 * (ec.k + 1.0) * std::log(s[0]));
    for (int i = 1; i <= ec.k; ++i) {
        v.add(ec.b2 * s[static_cast<std::size_t>(i)] * tk.h1[static_cast<std::size_t>(i - 1)]);
        v.add(-ec.b3 * tk.h2[static_cast<std::size_t>(i - 1)]);
        v.add(-ec.b4 * (ec.k + 1.0 - i) * std::log(s[static_cast<std::size_t>(i)]));
    }
    return v.value();
}

inline std::vector<double> tower_psi_hat_grad(const ExpansionConstants& ec,
                                              const std::vector<double>& s, const TowerKernels& tk) {
    rdetail2::check_tower(ec, tk, "tower_psi_hat_grad");
    if (s.size() != static_cast<std::size_t>(ec.k) + 1)
        throw std::invalid_argument("tower_psi_hat_grad: need k+1 ratio variables");
    std::vector<double> g(s.size());
    g[0] = 2.0 * ec.b1 * s[0] - ec.b4 * (ec.k + 1.0) / s[0];
    for (int i = 1; i <= ec.k; ++i)
        g[static_cast<std::size_t>(i)] = ec.b2 * tk.h1[static_cast<std::size_t>(i - 1)] -
                                         ec.b4 * (ec.k + 1.0 - i) / s[static_cast<std::size_t>(i)];
    return g;
}

// Diagonal Hessian of psi_hat (the ratio variables decouple).
inline Matrix tower_psi_hat_hess(const ExpansionConstants& ec, const std::vector<double>& s,
                                 const TowerKernels& tk) {
    rdetail2::check_tower(ec, tk, "tower_psi_hat_hess");
    const std::size_t n = s.size();
    Matrix h(n, std::vector<double>(n, 0.0));
    h[0][0] = 2.0 * ec.b1 + ec.b4 * (ec.k + 1.0) / (s[0] * s[0]);
    for (int i = 1; i <= ec.k; ++i)
        h[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
            ec.b4 * (ec.k + 1.0 - i) / sq(s[static_cast<std::size_t>(i)]);
    return h;
}

// Same functional in the raw scales lambda_1..lambda_{k+1}.
inline double tower_psi(int N, const ExpansionConstants& ec, const std::vector<double>& lambda,
                        const TowerKernels& tk) {
    rdetail2::check_tower(ec, tk, "tower_psi");
    if (lambda.size() != static_cast<std::size_t>(ec.k) + 1)
        throw std::invalid_argument("tower_psi: need k+1 scales");
    const double p = 0.5 * (N - 2.0);
    std::vector<double> s(lambda.size());
    if (!(lambda[0] > 0.0)) throw std::domain_error("tower_psi: scales must be positive");
    s[0] = std::pow(lambda[0], p);
    for (std::size_t i = 1; i < lambda.size(); ++i) {
        if (!(lambda[i] > 0.0)) throw std::domain_error("tower_psi: scales must be positive");
        s[i] = std::pow(lambda[i] / lambda[i - 1], p);
    }
    return tower_psi_hat(ec, s, tk);
}

// Per-level radial term of the critical value:
//   g_i(zeta) = b4 (k+1-i) ln h1(|zeta|) - b3 h2(|zeta|).
inline double tower_g(const ExpansionConstants& ec, int i, double h1_val, double h2_val) {
    if (ec.variant != ExpansionVariant::tower)
        throw std::invalid_argument("tower_g: constants must use the tower variant");
    if (i < 1 || i > ec.k) throw std::invalid_argument("tower_g: level out of range");
    if (!(h1_val > 0.0)) throw std::domain_error("tower_g: first kernel must be positive");
    return ec.b4 * (ec.k + 1.0 - i) * std::log(h1_val) - ec.b3 * h2_val;
}

struct TowerCritical {
    std::vector<double> s_hat;    // critical ratio variables
    std::vector<double> lambda;   // corresponding raw scales
    double value = 0.0;           // psi_hat at the critical ratios
    double offset_value = 0.0;    // same value assembled as c1 + sum_i g_i
};

// Exact critical ratios: s_1 = sqrt((k+1) b4 / (2 b1)),
// s_{i+1} = (k+1-i) b4 / (b2 h1_i); the value decomposes into the
// configuration constant c1 plus the per-level terms g_i.
inline TowerCritical tower_critical(int N, const ExpansionConstants& ec, const TowerKernels& tk) {
    rdetail2::check_tower(ec, tk, "tower_critical");
    const double p = 0.5 * (N - 2.0);
    TowerCritical out;
    out.s_hat.resize(static_cast<std::size_t>(ec.k) + 1);
    out.s_hat[0] = std::sqrt((ec.k + 1.0) * ec.b4 / (2.0 * ec.b1));
    for (int i = 1; i <= ec.k; ++i) {
        const double h1i = tk.h1[static_cast<std::size_t>(i - 1)];
        if (!(h1i > 0.0)) throw std::domain_error("tower_critical: first kernel must be positive");
        out.s_hat[static_cast<std::size_t>(i)] = (ec.k + 1.0 - i) * ec.b4 / (ec.b2 * h1i);
    }
    out.lambda.resize(out.s_hat.size());
    out.lambda[0] = std::exp(std::log(out.s_hat[0]) / p);
    for (std::size_t i = 1; i < out.s_hat.size(); ++i)
        out.lambda[i] = out.lambda[i - 1] * std::exp(std::log(out.s_hat[i]) / p);
    out.value = tower_psi_hat(ec, out.s_hat, tk);
    KahanSum ov;
    ov.add(ec.c1);
    for (int i = 1; i <= ec.k; ++i)
        ov.add(tower_g(ec, i, tk.h1[static_cast<std::size_t>(i - 1)],
                       tk.h2[static_cast<std::size_t>(i - 1)]));
    out.offset_value = ov.value();
    return out;
}

// Normalization constant of the second-kernel curvature:
//   j2(N) = |S^{N-1}| * int_0^inf r^{N-5} (1 + r^2)^{-(N-2)} dr.
inline double tower_j2_closed(int N) {
    bdetail::check_dimension(N, "tower_j2_closed");
    return sphere_area(N) * radial_power_integral(N - 5.0, N - 2.0);
}

inline double tower_j2_quadrature(int N, const QuadratureSpec& q = {}) {
    bdetail::check_dimension(N, "tower_j2_quadrature");
    QuadOptions opt = to_options(q);
    auto f = [N](double r) {
        return std::exp((N - 5.0) * std::log(r) - (N - 2.0) * std::log1p(r * r));
    };
    const auto res = integrate_to_inf(f, 0.0, graded_hints(0.0, 1.0, q.grading_levels, q.grading_ratio), opt);
    return sphere_area(N) * res.value;
}

// Per-coordinate curvature of g_i at zeta = 0 in the closed form carried by
// the expansion (second-kernel contribution only): (2N-8)/N * b3 * j2.  The
// off-diagonal entries vanish by radial symmetry.  The logarithmic
// first-kernel term contributes additional curvature that this closed form
// does not include; finite differences of g_i itself recover the full
// diagonal, and reports print both values side by side.
inline double tower_g_claimed_curvature(int N, const ExpansionConstants& ec) {
    if (ec.variant != ExpansionVariant::tower)
        throw std::invalid_argument("tower_g_claimed_curvature: constants must use the tower variant");
    return (2.0 * N - 8.0) / N * ec.b3 * tower_j2_closed(N);
}

}  // namespace bubblereduce

#endif  // BUBBLEREDUCE_REDUCED_HPP
