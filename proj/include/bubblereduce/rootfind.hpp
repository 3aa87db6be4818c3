#pragma once

// Root isolation and certification for the one-dimensional sign functions,
// damped Newton iteration for the few-variable balancing systems, and
// eigenvalue classification of their small Hessians.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "common.hpp"

namespace bubblereduce {

// ---------------------------------------------------------------------------
// 1D sign scan and Brent refinement
// ---------------------------------------------------------------------------

struct Bracket {
    double lo = 0.0, hi = 0.0;
    double f_lo = 0.0, f_hi = 0.0;
};

// Evaluate f on n+1 uniform nodes of [a, b] and collect every adjacent pair
// with a strict sign change. Nodes where f is not finite break the chain and
// never enter a bracket. An exact zero at a node is returned as a degenerate
// bracket [node, node].
template <class F>
std::vector<Bracket> scan_sign(F&& f, double a, double b, int n) {
    if (!(b > a)) throw std::invalid_argument("scan_sign: empty interval");
    if (n < 1) throw std::invalid_argument("scan_sign: need at least one panel");
    std::vector<Bracket> out;
    double xp = 0.0, fp = 0.0;
    bool have_prev = false;
    for (int i = 0; i <= n; ++i) {
        const double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
        const double fx = f(x);
        if (!std::isfinite(fx)) {
            have_prev = false;
            continue;
        }
        if (fx == 0.0) {
            out.push_back({x, x, 0.0, 0.0});
            have_prev = false;
            continue;
        }
        if (have_prev && std::signbit(fp) != std::signbit(fx)) {
            out.push_back({xp, x, fp, fx});
        }
        xp = x;
        fp = fx;
        have_prev = true;
    }
    return out;
}

struct RootReport {
    double root = std::numeric_limits<double>::quiet_NaN();
    double f_root = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();  // |f(root)|
    double slope = 0.0;             // secant slope across a small window at the root
    double scaled_residual =        // residual / (|slope| * max(1, |root|));
        std::numeric_limits<double>::infinity();  // O(eps) certifies a true root,
                                                  // O(1) exposes a pole crossing
    int iterations = 0;
    bool converged = false;
};

// Brent's method on a sign-changing bracket: inverse quadratic interpolation
// and secant steps guarded by bisection. Converges in the abscissa for any
// sign change, including pole crossings; the scaled residual separates the
// two cases afterwards.
template <class F>
RootReport refine_root(F&& f, const Bracket& br, double rel_tol = 1e-12,
                       int max_iter = 200) {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("refine_root: rel_tol must be positive");
    RootReport rep;
    double a = br.lo, b = br.hi;
    double fa = br.f_lo;
    double fb = br.f_hi;
    if (a == b) {  // degenerate bracket from an exact node zero
        rep.root = a;
        rep.f_root = br.f_lo;
        rep.residual = std::abs(br.f_lo);
        rep.converged = true;
    } else {
        if (!(fa * fb < 0.0))
            throw std::invalid_argument("refine_root: bracket does not change sign");
        double c = b, fc = fb;
        double d = 0.0, e = 0.0;
        const double eps = std::numeric_limits<double>::epsilon();
        for (int it = 1; it <= max_iter; ++it) {
            rep.iterations = it;
            if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
                c = a;
                fc = fa;
                e = d = b - a;
            }
            if (std::abs(fc) < std::abs(fb)) {
                a = b; b = c; c = a;
                fa = fb; fb = fc; fc = fa;
            }
            const double tol1 =
                2.0 * eps * std::abs(b) + 0.5 * rel_tol * std::max(1.0, std::abs(b));
            const double xm = 0.5 * (c - b);
            if (std::abs(xm) <= tol1 || fb == 0.0) {
                rep.converged = true;
                break;
            }
            if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
                double p, q;
                const double s = fb / fa;
                if (a == c) {
                    p = 2.0 * xm * s;
                    q = 1.0 - s;
                } else {
                    const double qq = fa / fc;
                    const double r = fb / fc;
                    p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                    q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
                }
                if (p > 0.0) q = -q;
                p = std::abs(p);
                const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
                const double min2 = std::abs(e * q);
                if (2.0 * p < std::min(min1, min2)) {
                    e = d;
                    d = p / q;
                } else {
                    d = xm;
                    e = d;
                }
            } else {
                d = xm;
                e = d;
            }
            a = b;
            fa = fb;
            b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
            fb = f(b);
        }
        rep.root = b;
        rep.f_root = fb;
        rep.residual = std::abs(fb);
    }

    // Certify with a secant slope across a small window clipped to the
    // original bracket (one-sided at an edge).
    const double h = 1e-6 * std::max(1.0, std::abs(rep.root));
    const double xl = std::max(rep.root - h, std::min(br.lo, br.hi));
    const double xr = std::min(rep.root + h, std::max(br.lo, br.hi));
    if (xr > xl) {
        rep.slope = (f(xr) - f(xl)) / (xr - xl);
    } else {
        rep.slope = (br.hi != br.lo) ? (br.f_hi - br.f_lo) / (br.hi - br.lo) : 0.0;
    }
    const double denom = std::abs(rep.slope) * std::max(1.0, std::abs(rep.root));
    rep.scaled_residual = (denom > 0.0)
                              ? rep.residual / denom
                              : (rep.residual == 0.0
                                     ? 0.0
                                     : std::numeric_limits<double>::infinity());
    return rep;
}

// ---------------------------------------------------------------------------
// Small dense linear algebra
// ---------------------------------------------------------------------------

namespace rdetail {

// Solve A x = rhs in place by LU with partial pivoting; returns false when a
// pivot falls below roundoff of its column.
inline bool lu_solve(Matrix a, std::vector<double> rhs, std::vector<double>& x) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double big = std::abs(a[col][col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > big) {
                big = std::abs(a[r][col]);
                piv = r;
            }
        }
        double colscale = 0.0;
        for (std::size_t r = 0; r < n; ++r) colscale = std::max(colscale, std::abs(a[r][col]));
        if (!(big > 1e-14 * std::max(colscale, 1e-300))) return false;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            std::swap(rhs[piv], rhs[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double m = a[r][col] / a[col][col];
            if (m == 0.0) continue;
            for (std::size_t cc = col; cc < n; ++cc) a[r][cc] -= m * a[col][cc];
            rhs[r] -= m * rhs[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double s = rhs[ri];
        for (std::size_t cc = ri + 1; cc < n; ++cc) s -= a[ri][cc] * x[cc];
        x[ri] = s / a[ri][ri];
    }
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

inline double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace rdetail

// ---------------------------------------------------------------------------
// Damped Newton for F(x) = 0, x in R^n (n small)
// ---------------------------------------------------------------------------

struct NewtonOptions {
    int max_iter = 100;
    double step_tol = 1e-13;   // relative full-step size declaring convergence
    double f_tol = 0.0;        // absolute residual target (0 = off)
    double tikhonov = 1e-12;   // diagonal shift scale for near-singular Jacobians
    int max_backtrack = 25;
};

struct NewtonReport {
    std::vector<double> x;
    std::vector<double> f;
    double f_norm = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

// fj(x) must return {F(x), J(x)} with J the Jacobian of F. Steps solve
// J d = -F (with a Tikhonov-shifted retry when the factorization fails) and
// backtrack on ||F|| until it decreases.
template <class FJ>
NewtonReport newton_nd(FJ&& fj, std::vector<double> x0, const NewtonOptions& opt = {}) {
    NewtonReport rep;
    rep.x = std::move(x0);
    const std::size_t n = rep.x.size();
    if (n == 0) throw std::invalid_argument("newton_nd: empty start vector");

    auto eval = fj(rep.x);
    rep.f = std::move(eval.first);
    Matrix jac = std::move(eval.second);
    if (rep.f.size() != n || jac.size() != n)
        throw std::invalid_argument("newton_nd: dimension mismatch from fj");
    rep.f_norm = rdetail::inf_norm(rep.f);

    for (int it = 1; it <= opt.max_iter; ++it) {
        rep.iterations = it;
        if (rep.f_norm <= opt.f_tol) {
            rep.converged = true;
            return rep;
        }
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = -rep.f[i];

        std::vector<double> d;
        if (!rdetail::lu_solve(jac, rhs, d)) {
            Matrix shifted = jac;
            double diag = 0.0;
            for (std::size_t i = 0; i < n; ++i) diag = std::max(diag, std::abs(jac[i][i]));
            const double tau = opt.tikhonov * (1.0 + diag);
            for (std::size_t i = 0; i < n; ++i) shifted[i][i] += tau;
            if (!rdetail::lu_solve(shifted, rhs, d)) {
                rep.converged = false;
                return rep;  // hopeless Jacobian
            }
        }

        double alpha = 1.0;
        bool accepted = false;
        bool full_step = false;
        for (int bt = 0; bt <= opt.max_backtrack; ++bt, alpha *= 0.5) {
            std::vector<double> cand(n);
            for (std::size_t i = 0; i < n; ++i) cand[i] = rep.x[i] + alpha * d[i];
            auto ev = fj(cand);
            const double fn = rdetail::inf_norm(ev.first);
            if (fn < rep.f_norm || fn == 0.0) {
                rep.x = std::move(cand);
                rep.f = std::move(ev.first);
                jac = std::move(ev.second);
                rep.f_norm = fn;
                accepted = true;
                full_step = (bt == 0);
                break;
            }
        }
        if (!accepted) {
            // no descent left along the Newton direction: converged only if
            // the proposed full step was already negligible
            rep.converged =
                rdetail::inf_norm(d) <= opt.step_tol * (1.0 + rdetail::inf_norm(rep.x));
            return rep;
        }
        if (full_step &&
            rdetail::inf_norm(d) <= opt.step_tol * (1.0 + rdetail::inf_norm(rep.x))) {
            rep.converged = true;
            return rep;
        }
    }
    rep.converged = rep.f_norm <= opt.f_tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Hessian classification by cyclic Jacobi eigenvalues
// ---------------------------------------------------------------------------

enum class HessianClass { positive_definite, negative_definite, indefinite, degenerate };

struct HessianReport {
    std::vector<double> eigenvalues;  // ascending
    HessianClass kind = HessianClass::degenerate;
    double zero_threshold = 0.0;      // 1e-8 x spectral radius
};

inline HessianReport classify_hessian(const Matrix& a_in) {
    const std::size_t n = a_in.size();
    if (n == 0) throw std::invalid_argument("classify_hessian: empty matrix");
    double scale = 0.0;
    for (const auto& row : a_in) {
        if (row.size() != n) throw std::invalid_argument("classify_hessian: matrix not square");
        for (double v : row) scale = std::max(scale, std::abs(v));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(a_in[i][j] - a_in[j][i]) > 1e-8 * std::max(scale, 1e-300))
                throw std::invalid_argument("classify_hessian: matrix not symmetric");

    Matrix a = a_in;
    // symmetrize roundoff-level asymmetry before rotating
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            a[i][j] = a[j][i] = 0.5 * (a[i][j] + a[j][i]);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += sq(a[p][q]);
        if (std::sqrt(off) <= 1e-15 * std::max(scale, 1e-300)) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = 0.5 * std::atan2(2.0 * a[p][q], a[q][q] - a[p][p]);
                const double c = std::cos(theta), s = std::sin(theta);
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a[p][i], aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
            }
        }
    }

    HessianReport rep;
    rep.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) rep.eigenvalues[i] = a[i][i];
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());
    double rad = 0.0;
    for (double e : rep.eigenvalues) rad = std::max(rad, std::abs(e));
    rep.zero_threshold = 1e-8 * rad;
    bool any_zero = false, any_pos = false, any_neg = false;
    for (double e : rep.eigenvalues) {
        if (std::abs(e) <= rep.zero_threshold) any_zero = true;
        else if (e > 0.0) any_pos = true;
        else any_neg = true;
    }
    if (rad == 0.0 || any_zero) rep.kind = HessianClass::degenerate;
    else if (any_pos && any_neg) rep.kind = HessianClass::indefinite;
    else if (any_pos) rep.kind = HessianClass::positive_definite;
    else rep.kind = HessianClass::negative_definite;
    return rep;
}

}  // namespace bubblereduce
