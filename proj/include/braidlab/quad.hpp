#ifndef BRAIDLAB_QUAD_HPP
#define BRAIDLAB_QUAD_HPP

#include <cmath>
#include <functional>

namespace braidlab {

namespace detail {

template <typename F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature with absolute tolerance.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-9, int max_depth = 40) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Composite 10-point Gauss-Legendre rule. For analytic integrands the result
/// is smooth in the endpoints, which matters when quadrature results are fed
/// into finite differences.
template <typename F>
double gauss_legendre(const F& f, double a, double b, int panels = 16) {
    static const double xs[5] = {0.14887433898163121, 0.43339539412924719, 0.67940956829902441,
                                 0.86506336668898451, 0.97390652851717172};
    static const double ws[5] = {0.29552422471475287, 0.26926671930999635, 0.21908636251598204,
                                 0.14945134915058059, 0.06667134430868814};
    if (a == b) return 0.0;
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        const double r = 0.5 * h;
        double s = 0.0;
        for (int i = 0; i < 5; ++i) s += ws[i] * (f(c - r * xs[i]) + f(c + r * xs[i]));
        total += r * s;
    }
    return total;
}

/// Bisection for a monotone predicate: returns the midpoint of the final
/// bracket [lo, hi] where pred(lo) != pred(hi). Caller guarantees the sign
/// change; use check_bracket for a guarded variant.
template <typename Pred>
double bisect(Pred pred, double lo, double hi, double tol) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (pred(mid))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace braidlab

#endif
