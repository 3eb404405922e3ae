#include "braidlab/codec.hpp"

#include "braidlab/errors.hpp"

namespace braidlab {

EncodeResult encode(const CbGraph& g, const std::vector<i64>& flows, int depth) {
    if (static_cast<i64>(flows.size()) != g.m0) throw param_error("flow vector size != m0");
    if (depth < 1 || depth > 62) throw param_error("counter depth must be in [1, 62]");
    EncodeResult r;
    r.exact.assign(static_cast<std::size_t>(g.m1), 0);
    for (i64 f = 0; f < g.m0; ++f) {
        if (flows[f] < 0) throw param_error("flow sizes must be nonnegative");
        for (i64 c : g.flow_adj[f]) r.exact[static_cast<std::size_t>(c)] += flows[f];
    }
    const i64 mod = i64{1} << depth;
    r.modular.resize(r.exact.size());
    r.overflow_count.resize(r.exact.size());
    r.overflowed.resize(r.exact.size());
    for (std::size_t c = 0; c < r.exact.size(); ++c) {
        r.modular[c] = r.exact[c] & (mod - 1);
        r.overflow_count[c] = r.exact[c] >> depth;
        r.overflowed[c] = r.overflow_count[c] > 0 ? 1 : 0;
    }
    return r;
}

void LayerConfig::validate() const {
    if (m0 < 1) throw param_error("m0 must be >= 1");
    if (layers.empty()) throw param_error("at least one layer required");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (layers[l].k < 2) throw param_error("layer k must be >= 2");
        if (layers[l].depth < 1 || layers[l].depth > 62) throw param_error("layer depth must be in [1, 62]");
        if (layers[l].m < 1) throw param_error("layer m must be >= 1");
        if (l > 0 && layers[l].m >= layers[l - 1].m)
            throw param_error("counter counts m_l must be strictly decreasing across layers");
    }
}

static void check_layer_graphs(const LayerConfig& cfg, const std::vector<CbGraph>& graphs) {
    if (graphs.size() != cfg.layers.size()) throw param_error("one graph per layer required");
    i64 flows = cfg.m0;
    for (std::size_t l = 0; l < graphs.size(); ++l) {
        if (graphs[l].m0 != flows || graphs[l].m1 != cfg.layers[l].m || graphs[l].k != cfg.layers[l].k)
            throw param_error("layer graph dimensions disagree with LayerConfig");
        flows = cfg.layers[l].m;
    }
}

std::vector<std::vector<i64>> ingest_trace(const LayerConfig& cfg, const std::vector<CbGraph>& graphs,
                                           const std::vector<i64>& trace) {
    cfg.validate();
    check_layer_graphs(cfg, graphs);
    std::vector<std::vector<i64>> stored(cfg.layers.size());
    for (std::size_t l = 0; l < cfg.layers.size(); ++l)
        stored[l].assign(static_cast<std::size_t>(cfg.layers[l].m), 0);

    // increment counter c of layer l by one, cascading on wrap
    auto bump = [&](auto&& self, std::size_t l, i64 c) -> void {
        const i64 mod = i64{1} << cfg.layers[l].depth;
        i64& v = stored[l][static_cast<std::size_t>(c)];
        v = (v + 1) & (mod - 1);
        if (v == 0 && l + 1 < cfg.layers.size()) {
            // counter c of layer l is flow c of layer l+1
            for (i64 c2 : graphs[l + 1].flow_adj[static_cast<std::size_t>(c)]) self(self, l + 1, c2);
        }
    };

    for (i64 f : trace) {
        if (f < 0 || f >= cfg.m0) throw param_error("unknown flow id in trace");
        for (i64 c : graphs[0].flow_adj[static_cast<std::size_t>(f)]) bump(bump, 0, c);
    }
    return stored;
}

std::vector<std::vector<i64>> encode_layers(const LayerConfig& cfg, const std::vector<CbGraph>& graphs,
                                            const std::vector<i64>& flow_counts) {
    cfg.validate();
    check_layer_graphs(cfg, graphs);
    std::vector<std::vector<i64>> stored(cfg.layers.size());
    std::vector<i64> in = flow_counts;
    for (std::size_t l = 0; l < cfg.layers.size(); ++l) {
        const auto enc = encode(graphs[l], in, cfg.layers[l].depth);
        stored[l] = enc.modular;
        in = enc.overflow_count;
    }
    return stored;
}

std::vector<i64> reconstruct_exact(const std::vector<i64>& stored, const std::vector<i64>& decoded_overflows,
                                   int depth) {
    if (stored.size() != decoded_overflows.size()) throw param_error("size mismatch in reconstruct_exact");
    std::vector<i64> exact(stored.size());
    for (std::size_t i = 0; i < stored.size(); ++i)
        exact[i] = decoded_overflows[i] * (i64{1} << depth) + stored[i];
    return exact;
}

}  // namespace braidlab
