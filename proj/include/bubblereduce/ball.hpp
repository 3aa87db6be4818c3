#pragma once

// Geometry of the unit ball: the exact Green function of the Dirichlet
// Laplacian and its regular part, the axis profile function for a pair of
// concentration points, ring placements of k points, the closed-form sign
// functions gamma/tau that drive the balancing conditions, and the stable
// root of the scale-ratio quadratic.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "common.hpp"

namespace bubblereduce {

namespace bdetail {

inline void check_dimension(int N, const char* who) {
    if (N < 5)
        throw std::invalid_argument(std::string(who) +
                                    ": dimension-too-small (N >= 5 required)");
}

inline void check_inside(const std::vector<double>& x, const char* who) {
    if (!(norm2(x) < 1.0))
        throw std::domain_error(std::string(who) +
                                ": point must lie strictly inside the unit ball");
}

// |x|^2 |y|^2 - 2 x.y + 1 in the cancellation-free form
// (1 - |x||y|)^2 + 2 (|x||y| - x.y); both terms are nonnegative by
// Cauchy-Schwarz, so the value stays accurate when x is near y near the
// boundary, where the naive form loses digits.
inline double kelvin_argument(const std::vector<double>& x, const std::vector<double>& y) {
    const double ab = norm(x) * norm(y);
    const double gap = std::max(0.0, ab - dot(x, y));
    return sq(1.0 - ab) + 2.0 * gap;
}

inline void check_interior_t(double t, const char* who) {
    if (!(t > 0.0) || !(t < 1.0))
        throw std::domain_error(std::string(who) + ": t must lie in (0, 1)");
}

}  // namespace bdetail

// Regular part of the Green function: H(x, y) = (|x|^2|y|^2 - 2 x.y + 1)^{(2-N)/2}.
// Smooth and strictly positive for x, y inside the ball; H(0, 0) = 1.
inline double regular_part(int N, const std::vector<double>& x, const std::vector<double>& y) {
    bdetail::check_dimension(N, "regular_part");
    bdetail::check_inside(x, "regular_part");
    bdetail::check_inside(y, "regular_part");
    if (x.size() != y.size())
        throw std::invalid_argument("regular_part: dimension mismatch between points");
    return std::exp(0.5 * (2.0 - N) * std::log(bdetail::kelvin_argument(x, y)));
}

// Green function G(x, y) = |x - y|^{2-N} - H(x, y), positive for distinct
// interior points and vanishing as either point reaches the boundary.
inline double green(int N, const std::vector<double>& x, const std::vector<double>& y) {
    bdetail::check_dimension(N, "green");
    bdetail::check_inside(x, "green");
    bdetail::check_inside(y, "green");
    if (x.size() != y.size())
        throw std::invalid_argument("green: dimension mismatch between points");
    const double d2 = dist2(x, y);
    if (!(d2 > 0.0)) throw std::domain_error("green: points must be distinct");
    return std::exp(0.5 * (2.0 - N) * std::log(d2)) -
           std::exp(0.5 * (2.0 - N) * std::log(bdetail::kelvin_argument(x, y)));
}

// Profile function of the pair { x, 0 }: sqrt(H(x, x) H(0, 0)) + G(x, 0).
// Its minimizers locate the balanced two-point configurations.
inline double phi_point(int N, const std::vector<double>& x) {
    bdetail::check_dimension(N, "phi_point");
    bdetail::check_inside(x, "phi_point");
    const double r2 = norm2(x);
    if (!(r2 > 0.0)) throw std::domain_error("phi_point: x must be distinct from the origin");
    const std::vector<double> origin(x.size(), 0.0);
    return std::sqrt(regular_part(N, x, x)) + green(N, x, origin);
}

// The same profile restricted to the axis: an even function of t in (-1, 1)
// minus the origin,
//   phi(t) = (1 - t^2)^{-(N-2)/2} + |t|^{2-N} - 1.
inline double phi_axis(int N, double t) {
    bdetail::check_dimension(N, "phi_axis");
    const double a = std::abs(t);
    bdetail::check_interior_t(a, "phi_axis");
    return std::exp(-0.5 * (N - 2.0) * std::log1p(-a * a)) +
           std::exp((2.0 - N) * std::log(a)) - 1.0;
}

// k points on the ring of radius t in the (x1, x2)-plane of R^dim, at angles
// 2 pi i / k, i = 0..k-1. The first point always lies on the positive x1-axis.
inline std::vector<std::vector<double>> ring_placement(int k, double t, int dim) {
    if (k < 1) throw std::invalid_argument("ring_placement: k must be >= 1");
    if (dim < 2) throw std::invalid_argument("ring_placement: dim must be >= 2");
    bdetail::check_interior_t(t, "ring_placement");
    std::vector<std::vector<double>> pts(static_cast<std::size_t>(k),
                                         std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    for (int i = 0; i < k; ++i) {
        const double ang = 2.0 * PI * static_cast<double>(i) / static_cast<double>(k);
        pts[static_cast<std::size_t>(i)][0] = t * std::cos(ang);
        pts[static_cast<std::size_t>(i)][1] = t * std::sin(ang);
    }
    pts[0][0] = t;  // exact value on the axis, cos(0) notwithstanding
    pts[0][1] = 0.0;
    return pts;
}

// ---------------------------------------------------------------------------
// Closed-form sign functions on the ring radius t in (0, 1)
// ---------------------------------------------------------------------------
//
// tau1   : interaction of a ring point with the center,  G(t e1, 0)
// gamma1 : triangle self-term, H - (both neighbor interactions)
// gamma2 : square self-term minus all three interactions
// gamma3 : square self-term minus the diagonal interaction only
// gamma4 : square nearest-neighbor interaction
// Each *_prime is the exact t-derivative.

inline double tau1(int N, double t) {
    bdetail::check_dimension(N, "tau1");
    bdetail::check_interior_t(t, "tau1");
    return std::exp((2.0 - N) * std::log(t)) - 1.0;
}

inline double tau1_prime(int N, double t) {
    bdetail::check_dimension(N, "tau1");
    bdetail::check_interior_t(t, "tau1");
    return (2.0 - N) * std::exp((1.0 - N) * std::log(t));
}

inline double gamma1(int N, double t) {
    bdetail::check_dimension(N, "gamma1");
    bdetail::check_interior_t(t, "gamma1");
    const double p = 0.5 * (2.0 - N);
    return std::exp((2.0 - N) * std::log1p(-t * t)) -
           2.0 * std::exp((2.0 - N) * std::log(std::sqrt(3.0) * t)) +
           2.0 * std::exp(p * std::log(sq(sq(t)) + sq(t) + 1.0));
}

inline double gamma1_prime(int N, double t) {
    bdetail::check_dimension(N, "gamma1");
    bdetail::check_interior_t(t, "gamma1");
    const double t2 = sq(t);
    return (N - 2.0) *
           (2.0 * t * std::exp((1.0 - N) * std::log1p(-t2)) +
            2.0 * std::exp((2.0 - N) * std::log(std::sqrt(3.0))) *
                std::exp((1.0 - N) * std::log(t)) -
            (4.0 * t2 * t + 2.0 * t) * std::exp(-0.5 * N * std::log(sq(t2) + t2 + 1.0)));
}

inline double gamma2(int N, double t) {
    bdetail::check_dimension(N, "gamma2");
    bdetail::check_interior_t(t, "gamma2");
    const double p = 0.5 * (2.0 - N);
    const double t2 = sq(t);
    return std::exp((2.0 - N) * std::log1p(-t2)) -
           2.0 * std::exp((2.0 - N) * std::log(std::sqrt(2.0) * t)) +
           2.0 * std::exp(p * std::log(sq(t2) + 1.0)) -
           std::exp((2.0 - N) * std::log(2.0 * t)) +
           std::exp((2.0 - N) * std::log1p(t2));
}

inline double gamma2_prime(int N, double t) {
    bdetail::check_dimension(N, "gamma2");
    bdetail::check_interior_t(t, "gamma2");
    const double t2 = sq(t);
    return (N - 2.0) *
           (2.0 * t * std::exp((1.0 - N) * std::log1p(-t2)) +
            2.0 * std::exp((2.0 - N) * std::log(std::sqrt(2.0))) *
                std::exp((1.0 - N) * std::log(t)) -
            4.0 * t2 * t * std::exp(-0.5 * N * std::log(sq(t2) + 1.0)) +
            std::exp((2.0 - N) * std::log(2.0)) * std::exp((1.0 - N) * std::log(t)) -
            2.0 * t * std::exp((1.0 - N) * std::log1p(t2)));
}

inline double gamma3(int N, double t) {
    bdetail::check_dimension(N, "gamma3");
    bdetail::check_interior_t(t, "gamma3");
    const double t2 = sq(t);
    return std::exp((2.0 - N) * std::log1p(-t2)) -
           std::exp((2.0 - N) * std::log(2.0 * t)) +
           std::exp((2.0 - N) * std::log1p(t2));
}

inline double gamma3_prime(int N, double t) {
    bdetail::check_dimension(N, "gamma3");
    bdetail::check_interior_t(t, "gamma3");
    const double t2 = sq(t);
    return (N - 2.0) *
           (2.0 * t * std::exp((1.0 - N) * std::log1p(-t2)) +
            std::exp((2.0 - N) * std::log(2.0)) * std::exp((1.0 - N) * std::log(t)) -
            2.0 * t * std::exp((1.0 - N) * std::log1p(t2)));
}

inline double gamma4(int N, double t) {
    bdetail::check_dimension(N, "gamma4");
    bdetail::check_interior_t(t, "gamma4");
    const double t2 = sq(t);
    return std::exp((2.0 - N) * std::log(std::sqrt(2.0) * t)) -
           std::exp(-0.5 * (N - 2.0) * std::log(sq(t2) + 1.0));
}

inline double gamma4_prime(int N, double t) {
    bdetail::check_dimension(N, "gamma4");
    bdetail::check_interior_t(t, "gamma4");
    const double t2 = sq(t);
    return (2.0 - N) * std::exp((2.0 - N) * std::log(std::sqrt(2.0))) *
               std::exp((1.0 - N) * std::log(t)) +
           2.0 * (N - 2.0) * t2 * t * std::exp(-0.5 * N * std::log(sq(t2) + 1.0));
}

// ---------------------------------------------------------------------------
// Scale-ratio quadratic
// ---------------------------------------------------------------------------

// Root of h00 a^2 + m g a - c = 0 taken with the + square root, evaluated in
// the conjugate form a = 2c / (m g + sqrt(m^2 g^2 + 4 h00 c)), which avoids
// the cancellation of the textbook formula when |c| << (m g)^2. A negative
// discriminant is reported as-is with NaN roots, never clamped.
struct AlphaBeta {
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double beta = std::numeric_limits<double>::quiet_NaN();
    double discriminant = 0.0;
};

inline AlphaBeta alpha_beta(double h00, double g, double c, int m) {
    if (m < 0) throw std::invalid_argument("alpha_beta: m must be >= 0");
    AlphaBeta out;
    const double mg = static_cast<double>(m) * g;
    out.discriminant = mg * mg + 4.0 * h00 * c;
    if (out.discriminant < 0.0) return out;  // reported, not clamped
    const double root = std::sqrt(out.discriminant);
    const double denom = mg + root;
    out.alpha = (denom != 0.0) ? 2.0 * c / denom : (root - mg) / (2.0 * h00);
    out.beta = c + g * out.alpha;
    return out;
}

}  // namespace bubblereduce
