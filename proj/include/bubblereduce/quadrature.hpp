#pragma once

// Adaptive 1D quadrature built on the 15-point Gauss–Kronrod rule, plus the
// derived machinery the rest of the library relies on:
//   * breakpoint "hints" that pre-split an interval before adaptation,
//   * geometrically graded panels toward an integrable endpoint singularity,
//   * the rational map r = s/(1-s) for integrals over [a, infinity),
//   * an iterated 2D integrator over x-dependent y-ranges.
// All nodes are interior, so integrands may blow up at interval endpoints as
// long as the integral itself converges. Panel traversal is depth-first and
// left-to-right with compensated accumulation, so results are bitwise
// deterministic for a fixed integrand and option set.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <vector>

#include "common.hpp"

namespace bubblereduce {

struct QuadOptions {
    double rel_tol = 1e-12;   // relative to the first-pass magnitude estimate
    double abs_tol = 1e-300;  // absolute floor (effectively off by default)
    int max_depth = 52;       // bisection depth per seed panel
    long long max_panels = 250000;  // global split budget per integrate() call
    // Relative noise level of the integrand itself (per evaluation).  When f is
    // produced by an inner adaptive integral it carries roughly that integral's
    // relative tolerance as noise; splitting a panel whose error estimate is
    // already below noise_floor * (its |f| mass) only chases that noise, so such
    // panels are accepted.  Zero keeps the default rounding-level floor.
    double noise_floor = 0.0;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;       // sum of accepted per-panel error estimates
    long long panels = 0;     // number of accepted panels
};

namespace qdetail {

// 15-point Kronrod extension of 7-point Gauss on [-1, 1].
// Nodes with odd index (and the center) carry the embedded Gauss rule.
inline constexpr double XGK[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double WGK[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502,
    0.1406532597155259,  0.1690047266392679,  0.1903505780647854,
    0.2044329400752989,  0.2094821410847278};
inline constexpr double WG[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct PanelEval {
    double result;   // Kronrod estimate of the panel integral
    double abserr;   // sharpened |Kronrod - Gauss| error estimate
    double resabs;   // estimate of the integral of |f| over the panel
};

template <class F>
inline PanelEval gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double ah = std::abs(h);

    double f1[7], f2[7];
    const double fc = f(c);
    double resg = WG[3] * fc;
    double resk = WGK[7] * fc;
    double resabs = WGK[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * XGK[j];
        f1[j] = f(c - dx);
        f2[j] = f(c + dx);
        const double fsum = f1[j] + f2[j];
        if (j & 1) resg += WG[j / 2] * fsum;
        resk += WGK[j] * fsum;
        resabs += WGK[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    }
    const double reskh = resk * 0.5;
    double resasc = WGK[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j) {
        resasc += WGK[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));
    }

    PanelEval out;
    out.result = resk * h;
    out.resabs = resabs * ah;
    resasc *= ah;
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
    if (out.resabs > std::numeric_limits<double>::min() / eps50) {
        err = std::max(err, eps50 * out.resabs);
    }
    out.abserr = err;
    return out;
}

template <class F>
struct AdaptState {
    F& f;
    double target;      // total absolute error budget
    double total_len;   // combined length of all seed panels
    double noise_rel;   // per-panel acceptance floor relative to the panel's |f| mass
    int max_depth;
    long long max_panels;
    KahanSum sum;
    KahanSum errsum;
    long long panels = 0;   // accepted panels
    long long spawned = 0;  // gk15 evaluations spent on splitting
};

template <class F>
inline void adapt(AdaptState<F>& st, double a, double b, const PanelEval& pe, int depth) {
    const double frac = (b - a) / st.total_len;
    const double m = 0.5 * (a + b);
    const bool splittable = (m > a) && (m < b) && depth < st.max_depth &&
                            st.spawned < st.max_panels;
    // A panel is done when it meets its share of the budget or when its error
    // estimate is already at the noise floor of its own |f| mass (rounding
    // noise at minimum, integrand noise if declared), where further splitting
    // cannot help.
    const double noise_floor =
        std::max(100.0 * std::numeric_limits<double>::epsilon(), st.noise_rel) *
        pe.resabs;
    if (pe.abserr <= std::max(st.target * frac, noise_floor) || !splittable) {
        st.sum.add(pe.result);
        st.errsum.add(pe.abserr);
        ++st.panels;
        return;
    }
    st.spawned += 2;
    const PanelEval left = gk15(st.f, a, m);
    const PanelEval right = gk15(st.f, m, b);
    adapt(st, a, m, left, depth + 1);
    adapt(st, m, b, right, depth + 1);
}

}  // namespace qdetail

// Integrate f over [a, b], pre-splitting at every hint that falls strictly
// inside the interval. Hints mark known structure (kinks, near-singular
// points, scale boundaries) so the first panels already separate them.
template <class F>
QuadResult integrate(F&& f, double a, double b,
                     const std::vector<double>& hints = {},
                     const QuadOptions& opt = QuadOptions{}) {
    QuadResult out;
    if (!(b > a)) return out;

    std::vector<double> pts;
    pts.reserve(hints.size() + 2);
    pts.push_back(a);
    for (double h : hints) {
        if (h > a && h < b) pts.push_back(h);
    }
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    // First pass over the seed panels fixes the magnitude scale the relative
    // tolerance refers to.
    const std::size_t nseg = pts.size() - 1;
    std::vector<qdetail::PanelEval> first(nseg);
    KahanSum scale_sum;
    KahanSum abs_sum;
    for (std::size_t i = 0; i < nseg; ++i) {
        first[i] = qdetail::gk15(f, pts[i], pts[i + 1]);
        scale_sum.add(first[i].result);
        abs_sum.add(first[i].resabs);
    }
    double scale = std::abs(scale_sum.value());
    if (scale == 0.0) scale = abs_sum.value();

    qdetail::AdaptState<std::remove_reference_t<F>> st{
        f, std::max(opt.abs_tol, opt.rel_tol * scale), b - a, opt.noise_floor,
        opt.max_depth, opt.max_panels, KahanSum{}, KahanSum{}, 0, 0};
    for (std::size_t i = 0; i < nseg; ++i) {
        qdetail::adapt(st, pts[i], pts[i + 1], first[i], 0);
    }
    out.value = st.sum.value();
    out.error = st.errsum.value();
    out.panels = st.panels;
    return out;
}

// Geometrically graded breakpoints accumulating at the left endpoint a:
// a + (b-a)*ratio^k for k = 1..levels. Feed these as hints when the
// integrand has an integrable singularity or steep scale at a.
inline std::vector<double> graded_hints(double a, double b, int levels = 40,
                                        double ratio = 0.5) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(std::max(levels, 0)));
    const double len = b - a;
    double t = 1.0;
    for (int i = 1; i <= levels; ++i) {
        t *= ratio;
        const double p = a + len * t;
        if (p > a && p < b) v.push_back(p);
    }
    return v;
}

// Integrate f over [a, infinity) through the rational substitution
// r = a + s/(1-s), s in [0, 1). Hints are given in the original r variable.
template <class F>
QuadResult integrate_to_inf(F&& f, double a,
                            const std::vector<double>& hints_r = {},
                            const QuadOptions& opt = QuadOptions{}) {
    auto g = [&f, a](double s) {
        const double om = 1.0 - s;
        const double r = a + s / om;
        return f(r) / (om * om);
    };
    std::vector<double> hs;
    hs.reserve(hints_r.size());
    for (double r : hints_r) {
        if (r > a) {
            const double t = r - a;
            hs.push_back(t / (1.0 + t));
        }
    }
    return integrate(g, 0.0, 1.0, hs, opt);
}

// Iterated 2D integral of f(x, y) over { ax <= x <= bx, ylo(x) <= y <= yhi(x) }.
// yhints(x) may return inner breakpoints for the slice at x; xhints are
// breakpoints for the outer variable. The inner tolerance should be tighter
// than the outer one, since inner values are the outer integrand.
template <class F, class Lo, class Hi, class HintFn>
QuadResult integrate2d_hinted(F&& f, double ax, double bx, Lo&& ylo, Hi&& yhi,
                              HintFn&& yhints,
                              const std::vector<double>& xhints = {},
                              const QuadOptions& outer = QuadOptions{},
                              const QuadOptions& inner = QuadOptions{}) {
    long long inner_panels = 0;
    auto outer_f = [&](double x) {
        const double a = ylo(x);
        const double b = yhi(x);
        if (!(b > a)) return 0.0;
        QuadResult r = integrate([&f, x](double y) { return f(x, y); }, a, b,
                                 yhints(x), inner);
        inner_panels += r.panels;
        return r.value;
    };
    QuadResult out = integrate(outer_f, ax, bx, xhints, outer);
    out.panels += inner_panels;
    return out;
}

template <class F, class Lo, class Hi>
QuadResult integrate2d(F&& f, double ax, double bx, Lo&& ylo, Hi&& yhi,
                       const QuadOptions& outer = QuadOptions{},
                       const QuadOptions& inner = QuadOptions{}) {
    return integrate2d_hinted(std::forward<F>(f), ax, bx, std::forward<Lo>(ylo),
                              std::forward<Hi>(yhi),
                              [](double) { return std::vector<double>{}; },
                              {}, outer, inner);
}

// User-facing quadrature request carried by the integral layer's operations.
// `compactification` names the [0,inf) change of variables; the rational map
// r = s/(1-s) is the only one shipped. `max_refinements` bounds the
// bisection depth of the adaptive driver, `grading_*` parametrize the
// geometric panel clustering applied at endpoint singularities.
struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    enum class Compactification { rational } compactification = Compactification::rational;
    int max_refinements = 40;
    int grading_levels = 40;
    double grading_ratio = 0.5;
};

inline QuadOptions to_options(const QuadratureSpec& s) {
    if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0))
        throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
    if (s.max_refinements < 1)
        throw std::invalid_argument("QuadratureSpec: max_refinements must be >= 1");
    QuadOptions o;
    o.rel_tol = s.rel_tol;
    o.abs_tol = s.abs_tol;
    o.max_depth = s.max_refinements;
    return o;
}

}  // namespace bubblereduce
