#ifndef BRAIDLAB_LAYERS_HPP
#define BRAIDLAB_LAYERS_HPP

#include <cstdint>
#include <vector>

#include "braidlab/dist.hpp"

namespace braidlab {

/// Dense pmf over {0, 1, ..., size-1} plus the mass beyond the truncation.
struct Pmf {
    std::vector<double> p;
    double tail = 0.0;

    double head_mass(i64 below) const;
};

/// All multisets of b integers >= min_part summing to a, each in
/// nondecreasing canonical order. Empty when infeasible.
std::vector<std::vector<i64>> integer_partitions(i64 a, i64 b, i64 min_part);

/// Truncated pmf of a flow-size law (values 0..trunc-1; remaining mass in tail).
Pmf truncate_dist(const FlowSizeDist& dist, i64 trunc);

/// Distribution of a counter's value: Poisson(gamma) node-degree prior
/// (truncated below 1e-12 tail) times the partition sum over order-b
/// partitions of a with summands >= min_part; each partition weighs
/// multinomial(b; multiplicities) * prod pmf. Values 0..trunc-1.
Pmf induced_counter_dist(const Pmf& flow_pmf, double gamma, i64 min_part, i64 trunc);

/// Next layer's flow sizes are overflow counts: floor(counter / 2^depth).
Pmf induced_flow_dist(const Pmf& counter_pmf, int depth);

/// Induced channel value of the next layer: one minus the counter head mass
/// below 2^(depth+1). Throws truncation_error when the pmf is too short.
double induced_epsilon(const Pmf& counter_pmf, int depth);

struct LayerSpec {
    int k = 0;
    double gamma = 0.0;
    int depth = 0;
};

struct MultilayerResult {
    double threshold = 0.0;               // overall eps threshold
    std::vector<double> layer_thresholds; // coupled BP threshold per layer
    std::vector<double> induced_eps;      // induced eps per layer >= 2 at the threshold
    bool layer1_binding = true;           // false when a deeper layer is the bottleneck
};

/// Two-step multilayer threshold: per-layer coupled thresholds first, then
/// the largest eps whose layer-1 recursion dies while every deeper layer's
/// induced eps stays below that layer's own threshold. The flow-size law is
/// swept as a one-parameter family through eps: a power law uses
/// alpha = -log2(eps); an explicit pmf rescales its tail mass.
MultilayerResult multilayer_threshold(const std::vector<LayerSpec>& layers, int N, int w,
                                      const FlowSizeDist& dist, double tol = 1e-4);

/// The family member at a given eps (exposed for tests and the CLI).
FlowSizeDist dist_at_eps(const FlowSizeDist& base, double eps);

/// Induced eps of layer l (>= 2) for a concrete flow-size law, walking the
/// induced distributions up the layer stack.
std::vector<double> induced_eps_stack(const std::vector<LayerSpec>& layers, const FlowSizeDist& dist);

}  // namespace braidlab

#endif
