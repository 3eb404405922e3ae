#include <cmath>
#include <map>

#include "doctest.h"

#include "braidlab/codec.hpp"
#include "braidlab/dist.hpp"
#include "braidlab/errors.hpp"
#include "braidlab/rng.hpp"
#include "test_util.hpp"

using namespace braidlab;

TEST_CASE("power-law sampler matches its tail law") {
    const auto d = FlowSizeDist::power_law(1.5);
    CHECK(d.f_min() == 2);
    CHECK(d.epsilon() == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-12));

    const i64 n = 200000;
    const auto sizes = sample_flow_sizes(d, n, 99);
    i64 above = 0;
    for (i64 s : sizes) {
        CHECK(s >= 2);
        if (s > 2) ++above;
    }
    const double p = std::pow(2.0, -1.5);
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::fabs(static_cast<double>(above) / n - p) < 3.0 * sigma);
}

TEST_CASE("power-law alpha=2 tail beyond 4") {
    const auto d = FlowSizeDist::power_law(2.0);
    const i64 n = 1000000;
    const auto sizes = sample_flow_sizes(d, n, 5);
    i64 above = 0;
    for (i64 s : sizes)
        if (s > 4) ++above;
    const double p = 1.0 / 16.0;  // closed-form tail 4^-2
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::fabs(static_cast<double>(above) / n - p) < 3.0 * sigma);
}

TEST_CASE("explicit pmf basics") {
    const auto point = FlowSizeDist::explicit_pmf({{2, 1.0}});
    const auto sizes = sample_flow_sizes(point, 1000, 7);
    for (i64 s : sizes) CHECK(s == 2);
    CHECK(epsilon_of(point) == 0.0);

    const auto two = FlowSizeDist::explicit_pmf({{2, 0.6}, {5, 0.4}});
    CHECK(epsilon_of(two) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(two.f_min() == 2);

    CHECK_THROWS_AS(FlowSizeDist::explicit_pmf({{2, 0.5}, {3, 0.6}}), param_error);
}

TEST_CASE("encode on the chain graph") {
    const auto g = testutil::chain_graph({2, 3});
    const auto r = encode(g, {2, 3}, 8);
    CHECK(r.exact == std::vector<i64>{2, 5, 3});
    CHECK(r.modular == std::vector<i64>{2, 5, 3});
    for (auto o : r.overflowed) CHECK(o == 0);

    const auto z = encode(g, {0, 0}, 8);
    CHECK(z.exact == std::vector<i64>{0, 0, 0});

    const auto big = encode(g, {200, 100}, 8);
    CHECK(big.exact[1] == 300);
    CHECK(big.modular[1] == 44);
    CHECK(big.overflow_count[1] == 1);
    CHECK(big.overflowed[1] == 1);

    CHECK_THROWS_AS(encode(g, {1, 2, 3}, 8), param_error);
}

TEST_CASE("encoding is linear in the flow vector") {
    EnsembleParams p{3, 40, 20};
    const auto g = sample_graph(p, 17);
    SplitMix64 rng(3);
    std::vector<i64> a(40), b(40), ab(40);
    for (int i = 0; i < 40; ++i) {
        a[i] = static_cast<i64>(rng.bounded(50));
        b[i] = static_cast<i64>(rng.bounded(50));
        ab[i] = a[i] + b[i];
    }
    const auto ra = encode(g, a, 30), rb = encode(g, b, 30), rab = encode(g, ab, 30);
    for (i64 c = 0; c < g.m1; ++c) CHECK(rab.exact[c] == ra.exact[c] + rb.exact[c]);
}

namespace {

// two-layer toy: flows -> 3 counters -> 2 counters
LayerConfig toy_layers(int d1, int d2, std::vector<CbGraph>& graphs) {
    LayerConfig cfg;
    cfg.m0 = 2;
    cfg.layers.push_back({2, 3, d1});
    cfg.layers.push_back({2, 2, d2});
    CbGraph g1 = testutil::make_graph(2, 3, {{0, 1}, {1, 2}}, {0, 0});
    CbGraph g2 = testutil::make_graph(2, 2, {{0, 1}, {0, 1}, {0, 1}}, {0, 0, 0});
    graphs = {g1, g2};
    return cfg;
}

}  // namespace

TEST_CASE("trace ingestion: empty and single-layer") {
    std::vector<CbGraph> graphs;
    const auto cfg = toy_layers(8, 8, graphs);
    const auto empty = ingest_trace(cfg, graphs, {});
    for (const auto& layer : empty)
        for (i64 v : layer) CHECK(v == 0);

    LayerConfig single;
    single.m0 = 2;
    single.layers.push_back({2, 3, 8});
    const auto g = testutil::chain_graph({0, 0});
    const auto res = ingest_trace(single, {g}, {0, 0, 1});
    CHECK(res[0] == std::vector<i64>{2, 3, 1});

    CHECK_THROWS_AS(ingest_trace(single, {g}, {5}), param_error);
}

TEST_CASE("cascade: layer-1 wrap increments the combined node upstairs") {
    std::vector<CbGraph> graphs;
    const auto cfg = toy_layers(2, 8, graphs);  // layer-1 counters wrap at 4
    std::vector<i64> trace(5, 0);               // flow 0 five times
    const auto res = ingest_trace(cfg, graphs, trace);
    // flow 0 hits layer-1 counters 0 and 1: value 5 -> stored 1, one wrap each
    CHECK(res[0][0] == 1);
    CHECK(res[0][1] == 1);
    CHECK(res[0][2] == 0);
    // wraps feed layer-2 flows 0 and 1, each incident to both layer-2 counters
    CHECK(res[1] == std::vector<i64>{2, 2});
}

TEST_CASE("trace/batch equivalence on random two-layer toys") {
    SplitMix64 rng(4242);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<CbGraph> graphs;
        const auto cfg = toy_layers(2, 3, graphs);
        std::vector<i64> trace;
        std::vector<i64> counts(2, 0);
        const int packets = static_cast<int>(rng.bounded(40));
        for (int p = 0; p < packets; ++p) {
            const i64 f = static_cast<i64>(rng.bounded(2));
            trace.push_back(f);
            ++counts[static_cast<std::size_t>(f)];
        }
        const auto streamed = ingest_trace(cfg, graphs, trace);
        const auto batch = encode_layers(cfg, graphs, counts);
        CHECK(streamed == batch);
    }
}

TEST_CASE("reconstructing exact counters from decoded overflows") {
    const auto g = testutil::chain_graph({200, 100});
    const auto enc = encode(g, {200, 100}, 8);
    const auto exact = reconstruct_exact(enc.modular, enc.overflow_count, 8);
    CHECK(exact == enc.exact);
}
