#ifndef BRAIDLAB_CODEC_HPP
#define BRAIDLAB_CODEC_HPP

#include <cstdint>
#include <vector>

#include "braidlab/graph.hpp"

namespace braidlab {

struct EncodeResult {
    std::vector<i64> exact;           // sum of incident flow sizes
    std::vector<i64> modular;         // exact mod 2^depth
    std::vector<i64> overflow_count;  // floor(exact / 2^depth)
    std::vector<std::uint8_t> overflowed;
};

/// Exact and modular counter values for one layer. Multi-edges contribute
/// once per edge instance, matching per-packet increments.
EncodeResult encode(const CbGraph& g, const std::vector<i64>& flows, int depth);

/// Layered configuration. Layer l has m_l counters of depth d_l bits, with
/// m_l strictly decreasing; flow i of layer l+1 is counter i of layer l
/// (identity inter-layer map). m0 is the number of distinct flows.
struct LayerConfig {
    struct Layer {
        int k = 0;
        i64 m = 0;
        int depth = 0;
    };
    i64 m0 = 0;
    std::vector<Layer> layers;

    void validate() const;
};

/// Feeds packets one at a time. Each packet increments the layer-1 counters
/// of its flow modulo 2^d_1; a wrap increments the next layer's counters of
/// the combined node, cascading; the last layer wraps silently. Returns the
/// stored (modular) counter arrays per layer.
std::vector<std::vector<i64>> ingest_trace(const LayerConfig& cfg, const std::vector<CbGraph>& graphs,
                                           const std::vector<i64>& trace);

/// Batch equivalent of ingest_trace: encodes aggregated flow counts layer by
/// layer, feeding each layer's overflow counts to the next.
std::vector<std::vector<i64>> encode_layers(const LayerConfig& cfg, const std::vector<CbGraph>& graphs,
                                            const std::vector<i64>& flow_counts);

/// Rebuilds a layer's exact counter values from the decoded flow sizes of the
/// layer above: exact = decoded_overflows * 2^depth + stored.
std::vector<i64> reconstruct_exact(const std::vector<i64>& stored, const std::vector<i64>& decoded_overflows,
                                   int depth);

}  // namespace braidlab

#endif
