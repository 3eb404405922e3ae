#include "braidlab/de.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "braidlab/errors.hpp"
#include "braidlab/quad.hpp"

namespace braidlab {

namespace {
constexpr double kZero = 1e-9;    // below this a fixed point counts as zero
constexpr double kStall = 1e-12;  // change below this counts as converged
constexpr double kEpsMax = 4.0;   // working eps domain (thresholds may exceed 1)
}  // namespace

void DeParams::validate() const {
    if (k < 2) throw param_error("k must be >= 2");
    if (!(gamma > 0.0)) throw param_error("gamma must be positive");
    if (eps < 0.0 || eps > kEpsMax) throw param_error("eps out of [0, 4]");
}

double rho(double z, double gamma) { return std::exp(-gamma * (1.0 - z)); }

double g_func(double x, int k, double gamma) {
    // 1 - rho(1 - t) = -expm1(-gamma*t), exact for tiny t
    const double a = -std::expm1(-gamma * x);
    return -std::expm1(-gamma * std::pow(a, k - 1));
}

double g_func_prime(double x, int k, double gamma) {
    const double r = rho(1.0 - x, gamma);
    const double a = 1.0 - r;
    const double b = std::pow(a, k - 1);
    const double bp = (k - 1) * std::pow(a, k - 2) * (gamma * r);
    return gamma * rho(1.0 - b, gamma) * bp;
}

double de_fixed_point(const DeParams& p, double tol, long max_iter) {
    p.validate();
    if (!(tol > 0.0)) throw param_error("tol must be positive");
    double x = 1.0;
    for (long i = 0; i < max_iter; ++i) {
        const double xn = p.eps * std::pow(g_func(x, p.k, p.gamma), p.k - 1);
        if (xn < 1e-12) return 0.0;  // far below any meaningful fixed point
        if (std::fabs(x - xn) < tol) return xn;
        x = xn;
    }
    throw convergence_error("density evolution did not reach tolerance", x);
}

bool de_succeeds(const DeParams& p, long max_iter) {
    p.validate();
    double x = 1.0;
    for (long i = 0; i < max_iter; ++i) {
        const double xn = p.eps * std::pow(g_func(x, p.k, p.gamma), p.k - 1);
        if (xn < kZero) return true;
        if (std::fabs(x - xn) < kStall) return false;
        x = xn;
    }
    return false;
}

double eps_bp(int k, double gamma, double tol) {
    DeParams p{k, gamma, 0.0};
    p.validate();
    if (!(tol > 0.0)) throw param_error("tol must be positive");
    auto dies = [&](double e) { return de_succeeds(DeParams{k, gamma, e}); };
    if (!dies(0.0)) throw bracket_error("eps_bp: recursion survives at eps=0");
    if (dies(kEpsMax)) throw bracket_error("eps_bp: recursion still dies at eps=4");
    return bisect(dies, 0.0, kEpsMax, tol);
}

double beta_bp(int k, double eps, double tol) {
    if (k < 2) throw param_error("k must be >= 2");
    if (!(tol > 0.0)) throw param_error("tol must be positive");
    const double lo = 0.02, hi = kEpsMax;
    auto dies = [&](double beta) { return de_succeeds(DeParams{k, k / beta, eps}); };
    if (dies(lo)) throw bracket_error("beta_bp: recursion already dies at beta=0.02");
    if (!dies(hi)) throw bracket_error("beta_bp: recursion survives at beta=4");
    // dies is monotone increasing in beta; bisect on the complement
    auto survives = [&](double beta) { return !dies(beta); };
    return bisect(survives, lo, hi, tol);
}

double eps_of_x(double x, int k, double gamma) {
    return x / std::pow(g_func(x, k, gamma), k - 1);
}

double eps_of_x_prime(double x, int k, double gamma) {
    const double gv = g_func(x, k, gamma);
    return (gv - (k - 1) * x * g_func_prime(x, k, gamma)) / std::pow(gv, k);
}

std::vector<CurvePoint> ebp_exit_curve(int k, double gamma, const std::vector<double>& x_grid) {
    std::vector<CurvePoint> pts;
    pts.reserve(x_grid.size());
    for (double x : x_grid) {
        if (!(x > 0.0) || x > 1.0) throw param_error("EBP grid must lie in (0, 1]");
        const double gv = g_func(x, k, gamma);
        pts.push_back({x, x / std::pow(gv, k - 1), std::pow(gv, k)});
    }
    return pts;
}

double int_g(double x, int k, double gamma, double tol) {
    return adaptive_simpson([&](double z) { return g_func(z, k, gamma); }, 0.0, x, tol);
}

double potential(double x, const DeParams& p) {
    const double gv = g_func(x, p.k, p.gamma);
    return x * gv - int_g(x, p.k, p.gamma) - p.eps / p.k * std::pow(gv, p.k);
}

double trial_entropy(double x, int k, double gamma) {
    return k * int_g(x, k, gamma) - (k - 1) * x * g_func(x, k, gamma);
}

double fixed_point_potential(double x, int k, double gamma) {
    return (1.0 - 1.0 / k) * x * g_func(x, k, gamma) - int_g(x, k, gamma);
}

namespace {

// sign of d(eps)/dx without the g^k division, stable near x = 0
double eps_slope(double x, int k, double gamma) {
    return g_func(x, k, gamma) - (k - 1) * x * g_func_prime(x, k, gamma);
}

double refine_root(const std::function<double(double)>& f, double lo, double hi, double flo) {
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((f(mid) < 0.0) == (flo < 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

AreaThreshold area_threshold(int k, double gamma) {
    if (k < 2) throw param_error("k must be >= 2");
    if (!(gamma > 0.0)) throw param_error("gamma must be positive");
    if (k == 2) {
        // eps(x) is increasing, the defining root degenerates to x -> 0 and
        // eps_bar = lim x/g(x) = 1/g'(0) = 1/gamma^2
        return {1.0 / (gamma * gamma), 0.0};
    }
    auto P = [&](double x) { return trial_entropy(x, k, gamma); };
    const int n = 4000;
    std::vector<double> roots;
    double xp = 1e-6, Pp = P(xp);
    for (int i = 1; i <= n; ++i) {
        const double x = 1e-6 + (1.0 - 1e-6) * i / n;
        const double Px = P(x);
        if (Px == 0.0)
            roots.push_back(x);
        else if ((Pp < 0.0) != (Px < 0.0))
            roots.push_back(refine_root(P, xp, x, Pp));
        xp = x;
        Pp = Px;
    }
    std::sort(roots.begin(), roots.end(), std::greater<>());
    for (double r : roots) {
        const double e = eps_of_x(r, k, gamma);
        // Definition-of-threshold side condition: eps(x') stays above eps(x*)
        // for all x' in (x*, 1]; scan plus slope-based fold refinement.
        bool admissible = true;
        const int m = 10000;
        double worst = std::numeric_limits<double>::max();
        for (int i = 1; i <= m && admissible; ++i) {
            const double x = r + (1.0 - r) * i / m;
            worst = std::min(worst, eps_of_x(x, k, gamma));
            if (worst <= e * (1.0 + 1e-9) + 1e-12) admissible = false;
        }
        if (admissible) {
            // refine any fold (slope sign change) to make sure no dip below e
            double prev = r + (1.0 - r) / m;
            double sp = eps_slope(prev, k, gamma);
            for (int i = 2; i <= m && admissible; ++i) {
                const double x = r + (1.0 - r) * i / m;
                const double s = eps_slope(x, k, gamma);
                if ((sp < 0.0) != (s < 0.0)) {
                    const double fold = refine_root([&](double t) { return eps_slope(t, k, gamma); },
                                                    prev, x, sp);
                    if (eps_of_x(fold, k, gamma) <= e * (1.0 + 1e-9) + 1e-12) admissible = false;
                }
                prev = x;
                sp = s;
            }
        }
        if (admissible) return {e, r};
    }
    throw structural_error("area_threshold: no admissible root of the trial entropy in (0, 1]");
}

double potential_threshold(int k, double gamma, double tol) {
    if (k < 2) throw param_error("k must be >= 2");
    if (!(tol > 0.0)) throw param_error("tol must be positive");
    // x_bar*(eps) = 0 iff U(x; eps) stays strictly positive on (0, 1]
    auto zero_is_global_min = [&](double eps) {
        const DeParams p{k, gamma, eps};
        // stability-driven dips (k = 2) live at scales below any uniform
        // grid; probe a geometric ladder towards zero first
        for (int j = 2; j <= 46; ++j)
            if (potential(std::ldexp(1.0, -j), p) <= 0.0) return false;
        const int n = 2048;
        double best_x = 0.0, best_u = std::numeric_limits<double>::max();
        for (int i = 1; i <= n; ++i) {
            const double x = static_cast<double>(i) / n;
            const double u = potential(x, p);
            if (u <= 0.0) return false;
            if (u < best_u) {
                best_u = u;
                best_x = x;
            }
        }
        // golden-section refinement around the grid minimum
        double a = std::max(1.0 / n, best_x - 2.0 / n), b = std::min(1.0, best_x + 2.0 / n);
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - phi * (b - a), d = a + phi * (b - a);
        double fc = potential(c, p), fd = potential(d, p);
        for (int it = 0; it < 120 && b - a > 1e-13; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = potential(c, p);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = potential(d, p);
            }
        }
        return std::min(fc, fd) > 0.0;
    };
    if (!zero_is_global_min(0.0)) throw bracket_error("potential_threshold: not minimized at 0 for eps=0");
    if (zero_is_global_min(kEpsMax)) throw bracket_error("potential_threshold: still minimized at 0 for eps=4");
    return bisect(zero_is_global_min, 0.0, kEpsMax, tol);
}

double area_threshold_beta(int k, double eps, double tol, double beta_lo, double beta_hi) {
    // over-provisioned chains (large beta) may have no defining root at all;
    // in beta terms that is still "threshold above the target"
    auto below = [&](double beta) {
        try {
            return area_threshold(k, k / beta).eps_bar < eps;
        } catch (const structural_error&) {
            return false;
        }
    };
    if (!below(beta_lo)) throw bracket_error("area_threshold_beta: eps_bar already above target at beta_lo");
    if (below(beta_hi)) throw bracket_error("area_threshold_beta: eps_bar below target at beta_hi");
    return bisect(below, beta_lo, beta_hi, tol);
}

EbpArea ebp_area(int k, double gamma) {
    EbpArea out;
    // parametric quadrature of g^k * eps'(x); the product cancels to
    // g - (k-1) x g', which stays finite at x = 0
    out.direct = adaptive_simpson([&](double z) { return eps_slope(z, k, gamma); }, 0.0, 1.0, 1e-10);
    // counting form: 1 - C + k*(C - int_0^1 rho(1-(1-rho(1-z))^(k-1)) dz)
    const double C = rho(1.0 - std::pow(1.0 - rho(0.0, gamma), k - 1), gamma);
    const double intS = adaptive_simpson(
        [&](double z) { return rho(1.0 - std::pow(1.0 - rho(1.0 - z, gamma), k - 1), gamma); }, 0.0, 1.0,
        1e-10);
    out.theorem_rhs = 1.0 - C + k * (C - intS);
    return out;
}

double x_bp_fold(int k, double gamma) {
    if (k == 2) return 0.0;
    const int n = 20000;
    double prev = 1.0, sp = eps_slope(prev, k, gamma);
    for (int i = 1; i <= n; ++i) {
        const double x = 1.0 - static_cast<double>(i) / n * (1.0 - 1e-7);
        const double s = eps_slope(x, k, gamma);
        if ((s < 0.0) != (sp < 0.0))
            return refine_root([&](double t) { return eps_slope(t, k, gamma); }, x, prev, s);
        prev = x;
        sp = s;
    }
    throw structural_error("x_bp_fold: no fold found (curve is monotone)");
}

double residual_rho(double z, double x, int k, double gamma) {
    return 1.0 - g_func(x - z * x, k, gamma) / g_func(x, k, gamma);
}

double rbar(double u, int k, double gamma) {
    auto f = [&](double t) { return 1.0 - g_func(1.0 - t, k, gamma); };
    const double num = gauss_legendre(f, 0.0, u, 24);
    const double den = gauss_legendre(f, 0.0, 1.0, 24);
    return num / den;
}

double rtilde(double z, double x, int k, double gamma) {
    auto f = [&](double t) { return 1.0 - g_func(1.0 - t, k, gamma); };
    const double den_full = gauss_legendre(f, 0.0, 1.0, 24);
    const double rb = [&](double u) { return gauss_legendre(f, 0.0, u, 24) / den_full; }(1.0 - x + z * x);
    const double rb0 = gauss_legendre(f, 0.0, 1.0 - x, 24) / den_full;
    const double rbp0 = f(1.0 - x) / den_full;  // d/du of rbar at 1-x
    const double num = rb - rb0 - z * x * rbp0;
    const double den = 1.0 - rb0 - x * rbp0;
    return num / den;
}

double residual_rho_series(double z, double x, int k, double gamma) {
    // rho~ = R~'(z)/R~'(1) with derivatives by Richardson-extrapolated central
    // differences; the quadratures underneath are smooth fixed-node rules
    auto deriv = [&](double at) {
        const double h = 1e-4;
        auto d = [&](double hh) {
            const double a = std::min(1.0, at + hh), b = std::max(0.0, at - hh);
            return (rtilde(a, x, k, gamma) - rtilde(b, x, k, gamma)) / (a - b);
        };
        const double d1 = d(h), d2 = d(0.5 * h);
        return (4.0 * d2 - d1) / 3.0;
    };
    return deriv(z) / deriv(1.0);
}

ResidualCurve residual_ebp_curve(int k, double gamma, double eps, const std::vector<double>& z_grid) {
    const double x = de_fixed_point(DeParams{k, gamma, eps});
    if (x <= kZero)
        throw structural_error("residual_ebp_curve: DE fixed point is zero, nothing residual");
    const double gx = g_func(x, k, gamma);
    auto gt = [&](double z) { return g_func(x * z, k, gamma) / gx; };
    auto gtp = [&](double z) { return x * g_func_prime(x * z, k, gamma) / gx; };

    ResidualCurve out;
    out.x_fixed = x;
    out.points.reserve(z_grid.size());
    for (double z : z_grid) {
        if (!(z > 0.0) || z > 1.0) throw param_error("residual grid must lie in (0, 1]");
        const double gv = gt(z);
        out.points.push_back({z, z / std::pow(gv, k - 1), std::pow(gv, k)});
    }
    out.area = adaptive_simpson([&](double z) { return gt(z) - (k - 1) * z * gtp(z); }, 0.0, 1.0, 1e-10);
    return out;
}

MaxwellDeState maxwell_de(int k, double gamma, double eps, double delta, double tol, long max_iter) {
    DeParams{k, gamma, eps}.validate();
    if (delta < 0.0 || delta > 1.0) throw param_error("delta must lie in [0, 1]");
    if (!(tol > 0.0)) throw param_error("tol must be positive");
    double x0 = 0.0, xs = 1.0;
    for (long i = 0; i < max_iter; ++i) {
        const double x0n = 1.0 - eps * std::pow(g_func(1.0 - x0, k, gamma), k - 1);
        const double xsn = (1.0 - delta) * eps * std::pow(g_func(xs, k, gamma), k - 1);
        const bool done = std::fabs(x0n - x0) < tol && std::fabs(xsn - xs) < tol;
        x0 = x0n;
        xs = xsn;
        if (done) return {x0, xs < 1e-14 ? 0.0 : xs, 1.0 - x0 - (xs < 1e-14 ? 0.0 : xs), delta};
    }
    throw convergence_error("maxwell_de did not converge", xs);
}

double maxwell_exit_lower_bound(int k, double gamma, double eps) {
    const double ebp = eps_bp(k, gamma, 1e-9);
    if (eps <= ebp) return 0.0;
    const double xbp = x_bp_fold(k, gamma);
    const double Pxbp = trial_entropy(xbp, k, gamma);
    auto Ly = [&](double e) {
        double x;
        try {
            x = de_fixed_point(DeParams{k, gamma, e}, 5e-12, 600'000);
        } catch (const convergence_error& ce) {
            x = ce.last_value;
        }
        return std::pow(g_func(x, k, gamma), k);
    };
    const double first = adaptive_simpson(Ly, ebp + 1e-7, eps, 1e-6);
    return first + Pxbp;
}

double bp_unconverged_fraction(int k, double gamma, double eps) {
    DeParams{k, gamma, eps}.validate();
    // joint evolution of (upper wrong, lower wrong) message indicators:
    // a = P(upper wrong), b = P(lower wrong), j = P(both wrong)
    double a = 1.0, b = 1.0, j = 1.0;
    for (long i = 0; i < 2'000'000; ++i) {
        const double an = std::pow(-std::expm1(-gamma * b), k - 1);
        const double bn = eps * std::pow(-std::expm1(-gamma * a), k - 1);
        const double inner =
            -std::expm1(-gamma * b) + std::exp(-gamma * a) * std::expm1(-gamma * (b - j));
        const double jn = eps * std::pow(std::max(inner, 0.0), k - 1);
        const bool done =
            std::fabs(an - a) < 1e-14 && std::fabs(bn - b) < 1e-14 && std::fabs(jn - j) < 1e-14;
        a = an;
        b = bn;
        j = jn;
        if (done) break;
    }
    const double yu = -std::expm1(-gamma * b);
    const double yv = -std::expm1(-gamma * a);
    const double yuv =
        std::max(-std::expm1(-gamma * b) + std::exp(-gamma * a) * std::expm1(-gamma * (b - j)), 0.0);
    // node level: unconverged = upper estimate wrong, or lower wrong while
    // the flow exceeds f_min
    return std::pow(yu, k) + eps * (std::pow(yv, k) - std::pow(yuv, k));
}

}  // namespace braidlab
