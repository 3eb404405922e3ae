#ifndef BRAIDLAB_DECODE_HPP
#define BRAIDLAB_DECODE_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "braidlab/graph.hpp"

namespace braidlab {

/// Messages and estimates are exact integers; "minus infinity" inside the
/// equivalent-graph decoder is a sentinel far below any feasible value.
constexpr i64 kNegInf = std::numeric_limits<i64>::min() / 4;

struct BpResult {
    std::vector<i64> estimates;
    std::vector<std::uint8_t> converged;  // odd and even estimates coincide
    int iterations = 0;                   // counter+flow rounds actually run
    bool stopped = false;                 // message state repeated at lag 2
};

/// Min-sum/max-sum decoder on the original graph. Counter rule: value minus
/// the sum of incoming messages on the other edges, clamped at f_min. Flow
/// rule: min over the other edges on odd rounds, max on even rounds; messages
/// start at f_min. Even-round estimates are nondecreasing lower bounds and
/// odd-round estimates nonincreasing upper bounds, so the decoder always
/// stops; we stop when the whole message vector repeats at lag 2 (exact
/// integer comparison), which implies the estimates repeat too.
BpResult bp_decode(const CbGraph& g, const std::vector<i64>& counters, i64 f_min, int l_max);

/// Same decoder driven on the depth-three equivalent graph (one equivalent
/// round corresponds to two original rounds). Counter processing walks each
/// tree T(c) in three steps; outgoing type-2 messages are the -inf sentinel.
BpResult bp_decode_equiv(const EquivGraph& eg, const CbGraph& g, const std::vector<i64>& counters,
                         i64 f_min, int l_max);

/// Per-round estimate vectors (round 1..rounds), for iteration-matched
/// comparisons between the two decoders.
std::vector<std::vector<i64>> bp_estimate_trace(const CbGraph& g, const std::vector<i64>& counters,
                                                i64 f_min, int rounds);
std::vector<std::vector<i64>> equiv_estimate_trace(const EquivGraph& eg, const CbGraph& g,
                                                   const std::vector<i64>& counters, i64 f_min,
                                                   int rounds);

struct PeelResult {
    std::vector<std::uint8_t> peeled;     // per flow
    std::vector<i64> estimates;           // valid where peeled
    std::vector<std::uint8_t> counter_removed;
    std::vector<i64> residual_counters;   // remaining value per surviving counter
    int iterations = 0;

    /// Residual graph relabeled to compact ids. flow_map/counter_map give the
    /// original id of each surviving node.
    CbGraph residual_graph(const CbGraph& g, std::vector<i64>* flow_map = nullptr,
                           std::vector<i64>* counter_map = nullptr) const;
};

/// BP augmented with the two peeling rules: a counter with a single remaining
/// edge resolves its flow, and an odd-round counter message equal to f_min
/// resolves that flow at f_min. Peeled flows leave the graph and their value
/// is subtracted from the remaining neighbors. Runs until no rule fires and
/// the message state repeats.
PeelResult peel_decode(const CbGraph& g, const std::vector<i64>& counters, i64 f_min);

struct MlResult {
    std::vector<std::vector<i64>> feasible;  // every integer vector >= f_min matching all counters
    bool capped = false;
    i64 best_sum = 0;                        // max total size over feasible vectors
    std::vector<i64> best;                   // a maximizer (empty if none feasible)
};

/// Exhaustive enumeration of feasible flow vectors; ground truth for the
/// decoders on tiny instances. node_cap bounds the search tree.
MlResult ml_oracle(const CbGraph& g, const std::vector<i64>& counters, i64 f_min,
                   std::size_t max_solutions = 1 << 20, std::uint64_t node_cap = 200'000'000);

}  // namespace braidlab

#endif
