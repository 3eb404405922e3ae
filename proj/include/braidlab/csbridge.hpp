#ifndef BRAIDLAB_CSBRIDGE_HPP
#define BRAIDLAB_CSBRIDGE_HPP

#include <string>
#include <vector>

namespace braidlab {

/// Undersampling bound of the explicit sparse construction,
/// beta(eps) = eps * ln(1/eps) / (ln 2)^2.
double sparse_bound(double eps);

/// Undersampling bound of the dense construction, beta(eps) = sqrt(eps).
double dense_bound(double eps);

struct PhasePoint {
    double tau = 0.0;
    double beta_th = 0.0;      // design-rate units (termination loss included)
    double gamma_star = 0.0;   // raw threshold gamma at this tau
    bool ok = false;
    std::string message;
};

/// Undersampling/sparsity phase transition of the coupled system read as a
/// compressed-sensing scheme with f_min = 0, where the sparsity ratio tau
/// plays the role of eps. Per tau the threshold gamma is bisected and
/// reported through the design rate. Bracket failures are reported per point
/// and the sweep continues.
std::vector<PhasePoint> phase_transition(int k, int N, int w, const std::vector<double>& tau_grid,
                                         double tol = 1e-4);

}  // namespace braidlab

#endif
