#ifndef BRAIDLAB_GRAPH_HPP
#define BRAIDLAB_GRAPH_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace braidlab {

using i64 = std::int64_t;

/// Single-layer ensemble: m0 left-regular flow nodes of degree k, m1 counter
/// nodes whose degrees are asymptotically Poisson(gamma) with
/// gamma = m0*k/m1 and beta = m1/m0 = k/gamma.
struct EnsembleParams {
    int k = 0;
    i64 m0 = 0;
    i64 m1 = 0;

    double gamma() const { return static_cast<double>(m0) * k / static_cast<double>(m1); }
    double beta() const { return static_cast<double>(m1) / static_cast<double>(m0); }
    void validate() const;
};

/// Coupled chain: N flow positions of kappa flows each, counters at
/// M = N + w - 1 positions, edges spread over a window of w positions.
struct ScParams {
    int N = 1;
    int w = 1;
    i64 kappa = 0;

    int M() const { return N + w - 1; }
    void validate(int k) const;
};

/// Sparse bipartite flow/counter graph with per-counter values. Immutable
/// after construction; safe to share across threads.
struct CbGraph {
    int k = 0;
    i64 m0 = 0;
    i64 m1 = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<i64>> flow_adj;  // per flow, the k incident counters (ordered, may repeat)
    std::vector<i64> counters;               // per-counter value
    std::vector<int> flow_pos;               // 1-based coupling positions; empty when uncoupled
    std::vector<int> counter_pos;

    i64 edge_count() const { return m0 * k; }
    bool coupled() const { return !flow_pos.empty(); }

    /// Edge ids are f*k + slot. Returns, per counter, the incident edge ids.
    std::vector<std::vector<i64>> counter_edges() const;
    std::vector<i64> counter_degrees() const;
    void validate() const;
};

/// Depth-three unrolling of every counter's neighborhood. For each counter c
/// the tree T(c) holds one depth-1 flow per incident edge, one depth-2
/// counter per continuing edge, and one leaf flow per path of length three.
/// Type-1 edges correspond to root->depth-1 paths, type-2 edges to
/// root->leaf paths; a type-2 edge is labeled by the leaf's parent counter.
/// Duplicate nodes along distinct paths are kept.
struct EquivGraph {
    struct Depth2 {
        i64 counter = 0;
        i64 via_edge = 0;                // edge (depth-1 flow, this counter)
        std::vector<i64> leaf_edges;     // edge (this counter, leaf flow) per leaf
    };
    struct Depth1 {
        i64 flow = 0;
        i64 via_edge = 0;                // edge (root, this flow); the type-1 edge
        std::vector<Depth2> children;
    };
    struct Tree {
        std::vector<Depth1> depth1;
    };

    std::vector<Tree> trees;             // one per counter
    i64 type1_edges = 0;
    i64 type2_edges = 0;
};

/// Uniformly random left-regular graph: each of the m0*k flow sockets picks a
/// counter independently and uniformly, so counter degrees are multinomial
/// (Poisson in the limit). Deterministic in (params, seed); multi-edges kept.
CbGraph sample_graph(const EnsembleParams& params, std::uint64_t seed);

/// Spatially-coupled sample: at each flow position the kappa*k sockets are
/// split by a uniform random interleaver into w equal subgroups, and subgroup
/// i is wired to counter position n+i. Every counter position holds
/// round(kappa*k/gamma) counters; boundary positions simply receive fewer
/// edges, which is where the termination seed comes from.
CbGraph sample_coupled_graph(int k, double gamma, const ScParams& sc, std::uint64_t seed);

EquivGraph build_equivalent_graph(const CbGraph& g);

/// Lossless JSON round-trip of the graph structure (counter values travel
/// separately as CSV).
std::string graph_to_json(const CbGraph& g);
CbGraph graph_from_json(const std::string& text);
void save_graph(const CbGraph& g, const std::string& path);
CbGraph load_graph(const std::string& path);

}  // namespace braidlab

#endif
