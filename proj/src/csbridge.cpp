#include "braidlab/csbridge.hpp"

#include <cmath>

#include "braidlab/errors.hpp"
#include "braidlab/quad.hpp"
#include "braidlab/scde.hpp"

namespace braidlab {

double sparse_bound(double eps) {
    if (!(eps > 0.0) || eps >= 1.0) throw param_error("sparse_bound needs eps in (0,1)");
    const double l2 = std::log(2.0);
    return eps * std::log(1.0 / eps) / (l2 * l2);
}

double dense_bound(double eps) {
    if (eps < 0.0 || eps > 1.0) throw param_error("dense_bound needs eps in [0,1]");
    return std::sqrt(eps);
}

std::vector<PhasePoint> phase_transition(int k, int N, int w, const std::vector<double>& tau_grid,
                                         double tol) {
    if (k < 2) throw param_error("k must be >= 2");
    std::vector<PhasePoint> out;
    out.reserve(tau_grid.size());
    for (double tau : tau_grid) {
        PhasePoint pt;
        pt.tau = tau;
        try {
            if (!(tau > 0.0) || tau >= 1.0) throw param_error("tau must lie in (0,1)");
            // recovery succeeds for small gamma (many counters); the
            // threshold is the largest gamma that still dies
            const double raw_beta = beta_bp_coupled_raw(k, tau, N, w, tol);
            pt.gamma_star = k / raw_beta;
            pt.beta_th = beta_c(k, pt.gamma_star, N, w);
            pt.ok = true;
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.message = e.what();
        }
        out.push_back(pt);
    }
    return out;
}

}  // namespace braidlab
