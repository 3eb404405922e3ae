#ifndef BRAIDLAB_DE_HPP
#define BRAIDLAB_DE_HPP

#include <vector>

namespace braidlab {

/// Parameters of the single-system density evolution
/// x <- eps * g(x)^(k-1), with g from g_func below. eps may exceed 1; the
/// recursion stays valid even though no physical system corresponds to it.
struct DeParams {
    int k = 2;
    double gamma = 1.0;
    double eps = 0.0;

    void validate() const;
};

/// Edge-perspective Poisson degree distribution, rho(z) = exp(-gamma*(1-z)).
double rho(double z, double gamma);

/// Two-round counter/flow composition
/// g(x) = 1 - rho(1 - (1 - rho(1 - x))^(k-1)); strictly increasing on [0,1].
double g_func(double x, int k, double gamma);
double g_func_prime(double x, int k, double gamma);

/// Largest fixed point of x <- eps*g(x)^(k-1), reached monotonically from
/// x = 1. Throws convergence_error when max_iter is hit first.
double de_fixed_point(const DeParams& p, double tol = 1e-13, long max_iter = 2'000'000);

/// True when the recursion started at x=1 collapses to zero.
bool de_succeeds(const DeParams& p, long max_iter = 2'000'000);

/// Threshold in eps at fixed (k, gamma): sup{eps | fixed point is 0}.
double eps_bp(int k, double gamma, double tol = 1e-6);
/// Threshold in beta = k/gamma at fixed (k, eps): inf{beta | fixed point is 0}.
double beta_bp(int k, double eps, double tol = 1e-6);

struct CurvePoint {
    double x = 0.0;
    double eps = 0.0;
    double h = 0.0;
};

/// eps(x) = x / g(x)^(k-1), the fixed-point equation solved for eps.
double eps_of_x(double x, int k, double gamma);
double eps_of_x_prime(double x, int k, double gamma);

/// EBP EXIT curve (eps(x), g(x)^k): the trace of all fixed points, stable and
/// unstable. h -> 0 as x -> 0; for k = 2 eps(0+) -> 1/gamma^2, for k >= 3 the
/// curve runs off to eps = infinity.
std::vector<CurvePoint> ebp_exit_curve(int k, double gamma, const std::vector<double>& x_grid);

/// int_0^x g(z) dz by adaptive quadrature.
double int_g(double x, int k, double gamma, double tol = 1e-10);

/// Single-system potential U(x; eps) = x g(x) - int_0^x g - (eps/k) g(x)^k.
double potential(double x, const DeParams& p);

/// Trial entropy P(x) = int_0^x h d(eps), closed form k*int_0^x g - (k-1)*x*g(x).
double trial_entropy(double x, int k, double gamma);

/// Fixed-point potential Q(x); P = -k Q identically.
double fixed_point_potential(double x, int k, double gamma);

struct AreaThreshold {
    double eps_bar = 0.0;
    double x_star = 0.0;
};

/// Largest root of P in (0,1] whose eps value is not revisited later on the
/// curve; for k = 2 the root degenerates to x -> 0 and eps_bar = 1/gamma^2.
AreaThreshold area_threshold(int k, double gamma);

/// sup{eps | the global minimizer of U(.; eps) is {0}}.
double potential_threshold(int k, double gamma, double tol = 1e-6);

/// Area threshold expressed in beta units: the beta at which eps_bar equals
/// the given eps.
double area_threshold_beta(int k, double eps, double tol = 1e-6, double beta_lo = 0.2,
                           double beta_hi = 1.5);

struct EbpArea {
    double direct = 0.0;        // quadrature along the parametric curve
    double theorem_rhs = 0.0;   // counting-argument expression
};

/// Two independent routes to int_0^1 h d(eps).
EbpArea ebp_area(int k, double gamma);

/// x coordinate of the curve fold (the BP threshold point) for k >= 3;
/// 0 for k = 2 where the curve is monotone.
double x_bp_fold(int k, double gamma);

struct ResidualCurve {
    std::vector<CurvePoint> points;
    double area = 0.0;
    double x_fixed = 0.0;       // DE fixed point the residual ensemble is built at
};

/// EBP EXIT curve of the expected residual graph left by the peeling decoder
/// at channel value eps: rho is replaced by
/// rho~(z; x) = 1 - g(x - z*x)/g(x) with x the largest DE fixed point.
ResidualCurve residual_ebp_curve(int k, double gamma, double eps, const std::vector<double>& z_grid);

/// rho~ via the closed form above.
double residual_rho(double z, double x, int k, double gamma);
/// rho~ via the normalized residual degree-distribution series R~ (quadrature
/// plus Richardson finite differences); slow, used to cross-check the closed
/// form.
double residual_rho_series(double z, double x, int k, double gamma);
/// R_bar(u): normalized integral of the removed-mass profile.
double rbar(double u, int k, double gamma);
/// R~(z; x): residual counter-node degree distribution generating function.
double rtilde(double z, double x, int k, double gamma);

struct MaxwellDeState {
    double x0 = 0.0;     // known
    double xstar = 0.0;  // unknown
    double xg = 0.0;     // guessed / expressible
    double delta = 0.0;
};

/// Three-component density evolution of the decoder with guesses, with guess
/// fraction delta. The known component iterates upward from 0, the unknown
/// component downward from 1; components always sum to one.
MaxwellDeState maxwell_de(int k, double gamma, double eps, double delta, double tol = 1e-13,
                          long max_iter = 2'000'000);

/// Lower bound on the Maxwell EXIT value at eps: guessing work accumulated
/// along the BP fixed-point branch minus the conditions recovered along the
/// EBP curve below the fold. Zero at the area threshold.
double maxwell_exit_lower_bound(int k, double gamma, double eps);

/// Asymptotic fraction of flows whose upper and lower estimates never meet,
/// from the joint (upper, lower) message-error recursion. Matches the Monte
/// Carlo unconverged fraction at large m0.
double bp_unconverged_fraction(int k, double gamma, double eps);

}  // namespace braidlab

#endif
