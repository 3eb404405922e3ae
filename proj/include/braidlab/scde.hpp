#ifndef BRAIDLAB_SCDE_HPP
#define BRAIDLAB_SCDE_HPP

#include <vector>

#include "braidlab/de.hpp"

namespace braidlab {

/// Parameters of the coupled recursion: N flow positions, window w, so
/// M = N + w - 1 counter positions.
struct CoupledParams {
    int k = 2;
    double gamma = 1.0;
    double eps = 0.0;
    int N = 1;
    int w = 1;

    int M() const { return N + w - 1; }
    void validate() const;
};

/// State vector over the M positions. Initialized to 1 on the N flow
/// positions and 0 beyond them.
struct CoupledState {
    CoupledParams params;
    std::vector<double> x;

    static CoupledState initial(const CoupledParams& p);
};

/// Row entries of the smoothing matrix A: A[p][q] = 1/w when
/// 1 <= q - p + 1 <= w, else 0. Band sums near the boundary keep their
/// missing terms as zeros (no renormalization), which is exactly the
/// termination seed.
double coupling_entry(int p, int q, int w);

/// One two-round update of the coupled recursion. Four windowed averages of
/// width w (counter, flow, counter, flow) with a single leading eps. For
/// w = 1 each position reduces to the uncoupled x <- eps*g(x)^(k-1).
CoupledState coupled_de_step(const CoupledState& s);

struct CoupledFpResult {
    std::vector<double> x;
    long iterations = 0;
    bool died = false;  // collapsed to zero everywhere
};

CoupledFpResult coupled_fixed_point(const CoupledParams& p, double tol = 1e-12,
                                    long max_iter = 100'000);

/// sup{eps | coupled recursion collapses}.
double eps_bp_coupled(int k, double gamma, int N, int w, double tol = 1e-5);

/// inf{beta | coupled recursion collapses}, reported in design-rate units:
/// the raw threshold k/gamma* is converted through the termination-aware
/// design rate, so the value is counters per flow of the terminated chain.
double beta_bp_coupled(int k, double eps, int N, int w, double tol = 1e-4);
/// Same bisection without the design-rate conversion.
double beta_bp_coupled_raw(int k, double eps, int N, int w, double tol = 1e-4);

/// Design rate in bits per flow of the terminated coupled ensemble
/// (Poisson series truncated below 1e-14).
double design_rate(int k, double gamma, int N, int w, int depth);
/// design_rate / depth: counters per flow including the termination loss.
double beta_c(int k, double gamma, int N, int w);
/// Inverts beta_c over gamma.
double gamma_for_beta_c(int k, double beta_target, int N, int w, double tol = 1e-10);

/// EBP EXIT point read off a coupled fixed point at one position:
/// eps(x) = x_i / xi_i(x) and h_i = (window-average of the counter output
/// around i)^k. Position is 1-based and must carry flow nodes (i <= N).
struct CoupledEbpPoint {
    double eps = 0.0;
    double h = 0.0;
};
CoupledEbpPoint coupled_ebp_point(const CoupledParams& p, const std::vector<double>& x, int i);

/// Traces the folded EBP curve of position i by anchored fixed-point
/// continuation: the state is re-solved with eps chosen each sweep so that
/// x_i stays pinned at t, for t over t_grid.
struct CoupledEbpSample {
    double t = 0.0;    // pinned x_i
    double eps = 0.0;
    double h = 0.0;
    bool converged = false;
};
std::vector<CoupledEbpSample> coupled_ebp_curve(int k, double gamma, int N, int w, int i,
                                                const std::vector<double>& t_grid,
                                                long max_iter = 200'000, double tol = 1e-11);

/// Two-phase windowed variant: odd rounds average the flow messages inside
/// the counter update, even rounds average the counter messages inside the
/// flow update (boundary windows clamped, divisor always w). This recursion
/// does saturate to the area threshold as w grows.
CoupledFpResult modified_coupled_fixed_point(const CoupledParams& p, double tol = 1e-12,
                                             long max_iter = 100'000);
double eps_bp_modified(int k, double gamma, int N, int w, double tol = 1e-5);
double beta_bp_modified(int k, double eps, int N, int w, double tol = 1e-4);
double beta_bp_modified_raw(int k, double eps, int N, int w, double tol = 1e-4);

}  // namespace braidlab

#endif
