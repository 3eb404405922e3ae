#include <algorithm>
#include <set>

#include "doctest.h"

#include "braidlab/decode.hpp"
#include "braidlab/dist.hpp"
#include "braidlab/errors.hpp"
#include "braidlab/graph.hpp"
#include "braidlab/maxwell.hpp"
#include "braidlab/rng.hpp"
#include "test_util.hpp"

using namespace braidlab;

namespace {

struct Instance {
    CbGraph g;
    std::vector<i64> flows;
};

Instance random_instance(int k, i64 m0, double gamma, std::uint64_t seed, i64 max_size = 20) {
    EnsembleParams p;
    p.k = k;
    p.m0 = m0;
    p.m1 = std::max<i64>(1, std::llround(m0 * k / gamma));
    Instance inst;
    inst.g = sample_graph(p, seed);
    SplitMix64 rng(seed ^ 0xABCDEF);
    inst.flows.resize(static_cast<std::size_t>(m0));
    for (auto& v : inst.flows) v = 2 + static_cast<i64>(rng.bounded(static_cast<std::uint64_t>(max_size - 1)));
    for (i64 f = 0; f < m0; ++f)
        for (i64 c : inst.g.flow_adj[f]) inst.g.counters[static_cast<std::size_t>(c)] += inst.flows[f];
    return inst;
}

}  // namespace

TEST_CASE("bp on the chain: exact estimates, both converged") {
    const auto g = testutil::chain_graph({2, 3});
    const auto r = bp_decode(g, g.counters, 2, 50);
    CHECK(r.estimates == std::vector<i64>{2, 3});
    CHECK(r.converged == std::vector<std::uint8_t>{1, 1});
    CHECK(r.stopped);
    CHECK(r.iterations <= 8);
}

TEST_CASE("bp: all flows at f_min converge immediately") {
    EnsembleParams p{3, 30, 15};
    auto g = sample_graph(p, 3);
    std::vector<i64> flows(30, 2);
    for (i64 f = 0; f < g.m0; ++f)
        for (i64 c : g.flow_adj[f]) g.counters[static_cast<std::size_t>(c)] += 2;
    const auto r = bp_decode(g, g.counters, 2, 50);
    for (i64 f = 0; f < g.m0; ++f) {
        CHECK(r.estimates[f] == 2);
        CHECK(r.converged[f] == 1);
    }
}

TEST_CASE("bp on the two-cycle: oscillation, nothing converges") {
    const auto g = testutil::two_cycle_graph({2, 3});
    // feasible set is {(2,3),(3,2)}: exhaustive oracle agrees below
    const auto ml = ml_oracle(g, g.counters, 2);
    REQUIRE(ml.feasible.size() == 2);
    const auto r = bp_decode(g, g.counters, 2, 60);
    CHECK(r.stopped);
    CHECK(r.converged == std::vector<std::uint8_t>{0, 0});
}

TEST_CASE("monotone bounds: even rounds under, odd rounds over the truth") {
    for (int t = 0; t < 10; ++t) {
        const auto inst = random_instance(3, 40, 4.0, 100 + t);
        const auto trace = bp_estimate_trace(inst.g, inst.g.counters, 2, 16);
        for (std::size_t l = 0; l < trace.size(); ++l) {
            for (i64 f = 0; f < inst.g.m0; ++f) {
                if (l % 2 == 0)  // rounds are 1-based: trace[0] is round 1 (odd)
                    CHECK(trace[l][f] >= inst.flows[f]);
                else
                    CHECK(trace[l][f] <= inst.flows[f]);
            }
        }
    }
}

TEST_CASE("equivalent-graph decoding matches the original at half the rounds") {
    SplitMix64 seed_rng(555);
    for (int t = 0; t < 30; ++t) {
        const int k = (t % 3 == 0) ? 2 : (t % 3 == 1) ? 3 : 6;
        const i64 m0 = 10 + static_cast<i64>(seed_rng.bounded(50));
        const auto inst = random_instance(k, m0, 2.0 * k, 9000 + t);
        const auto eg = build_equivalent_graph(inst.g);
        const int L = 12;
        const auto orig = bp_estimate_trace(inst.g, inst.g.counters, 2, 2 * L);
        const auto equiv = equiv_estimate_trace(eg, inst.g, inst.g.counters, 2, L);
        for (int l = 1; l <= L; ++l) CHECK(equiv[l - 1] == orig[2 * l - 1]);
    }
}

TEST_CASE("equivalent-graph decoder: f_min instance converges in one round") {
    const auto g = testutil::make_graph(2, 2, {{0, 1}, {0, 1}, {0, 1}}, {2, 2, 2});
    const auto eg = build_equivalent_graph(g);
    const auto r = bp_decode_equiv(eg, g, g.counters, 2, 10);
    for (i64 f = 0; f < g.m0; ++f) {
        CHECK(r.estimates[f] == 2);
        CHECK(r.converged[f] == 1);
    }
}

TEST_CASE("peeling rule 1: a degree-one counter resolves its flow") {
    //   f0 - {c0, c1}, f1 - {c1, c2}, truth (7, 4)
    const auto g = testutil::make_graph(2, 3, {{0, 1}, {1, 2}}, {7, 4});
    REQUIRE(g.counters == std::vector<i64>{7, 11, 4});
    const auto r = peel_decode(g, g.counters, 2);
    CHECK(r.peeled == std::vector<std::uint8_t>{1, 1});
    CHECK(r.estimates == std::vector<i64>{7, 4});
    for (i64 c = 0; c < g.m1; ++c)
        if (!r.counter_removed[c]) CHECK(r.residual_counters[c] == 0);
}

TEST_CASE("peeling on the two-cycle leaves the graph untouched") {
    const auto g = testutil::two_cycle_graph({2, 3});
    const auto r = peel_decode(g, g.counters, 2);
    CHECK(r.peeled == std::vector<std::uint8_t>{0, 0});
    std::vector<i64> fmap, cmap;
    const auto res = r.residual_graph(g, &fmap, &cmap);
    CHECK(res.m0 == 2);
    CHECK(res.m1 == 2);
    CHECK(res.counters == g.counters);
}

TEST_CASE("bp converged set equals peeled set") {
    SplitMix64 seed_rng(31);
    for (int t = 0; t < 60; ++t) {
        const int k = (t % 3 == 0) ? 2 : (t % 3 == 1) ? 3 : 6;
        const i64 m0 = 8 + static_cast<i64>(seed_rng.bounded(40));
        const auto inst = random_instance(k, m0, 1.3 * k, 777000 + t, 8);
        const auto bp = bp_decode(inst.g, inst.g.counters, 2, 2000);
        const auto peel = peel_decode(inst.g, inst.g.counters, 2);
        REQUIRE(bp.stopped);
        for (i64 f = 0; f < inst.g.m0; ++f) {
            CHECK(bp.converged[f] == peel.peeled[f]);
            if (peel.peeled[f]) CHECK(peel.estimates[f] == inst.flows[f]);
            if (bp.converged[f]) CHECK(bp.estimates[f] == inst.flows[f]);
        }
    }
}

TEST_CASE("ml oracle on tiny instances") {
    const auto chain = testutil::chain_graph({2, 3});
    const auto r1 = ml_oracle(chain, chain.counters, 2);
    REQUIRE(r1.feasible.size() == 1);
    CHECK(r1.feasible[0] == std::vector<i64>{2, 3});

    const auto cyc = testutil::two_cycle_graph({2, 3});
    const auto r2 = ml_oracle(cyc, cyc.counters, 2);
    std::set<std::vector<i64>> sols(r2.feasible.begin(), r2.feasible.end());
    CHECK(sols == std::set<std::vector<i64>>{{2, 3}, {3, 2}});
    CHECK(r2.best_sum == 5);

    const auto zero = testutil::make_graph(2, 2, {{0, 1}, {0, 1}}, {0, 0});
    const auto r3 = ml_oracle(zero, zero.counters, 0);
    REQUIRE(r3.feasible.size() == 1);
    CHECK(r3.feasible[0] == std::vector<i64>{0, 0});
}

TEST_CASE("maxwell: two-cycle needs one guess and stays ambiguous") {
    const auto g = testutil::two_cycle_graph({2, 3});
    const auto r = maxwell_decode(g, g.counters, 2, 99);
    CHECK(r.status == MaxwellStatus::Multiple);
    CHECK(r.guess_order.size() == 1);
    // the accumulated counter equations say phi0 + phi1 = 5
    bool found = false;
    for (const auto& eq : r.equations) {
        if (eq.coeff.size() == 2 && eq.rhs == 5) {
            bool all_one = true;
            for (const auto& [f, b] : eq.coeff) all_one = all_one && b == 1;
            found = found || all_one;
        }
    }
    // equations over guesses may already be eliminated; accept either the
    // explicit sum or full elimination with the bound pair
    if (!r.equations.empty()) CHECK(found);
}

TEST_CASE("maxwell: plain-bp-solvable instance needs no guess") {
    const auto g = testutil::chain_graph({2, 3});
    const auto r = maxwell_decode(g, g.counters, 2, 1);
    CHECK(r.status == MaxwellStatus::Unique);
    CHECK(r.guess_order.empty());
    CHECK(r.estimates == std::vector<i64>{2, 3});
}

TEST_CASE("maxwell: stalled triangle with full-rank system resolves uniquely") {
    // three flows pairwise sharing counters; BP stalls on every edge
    const auto g = testutil::make_graph(2, 3, {{0, 2}, {0, 1}, {1, 2}}, {3, 4, 5});
    const auto bp = bp_decode(g, g.counters, 2, 100);
    CHECK(bp.converged == std::vector<std::uint8_t>{0, 0, 0});
    const auto ml = ml_oracle(g, g.counters, 2);
    REQUIRE(ml.feasible.size() == 1);
    const auto r = maxwell_decode(g, g.counters, 2, 5);
    CHECK(r.status == MaxwellStatus::Unique);
    CHECK(r.estimates == ml.feasible[0]);
    CHECK(r.estimates == std::vector<i64>{3, 4, 5});
}

TEST_CASE("maxwell agrees with exhaustive feasibility on tiny instances") {
    SplitMix64 seed_rng(2718);
    int unique_cnt = 0, multiple_cnt = 0;
    for (int t = 0; t < 60; ++t) {
        const int k = (t % 2 == 0) ? 2 : 3;
        const i64 m0 = 3 + static_cast<i64>(seed_rng.bounded(6));
        const auto inst = random_instance(k, m0, 0.8 * k, 31000 + t, 5);
        const auto ml = ml_oracle(inst.g, inst.g.counters, 2);
        const auto mx = maxwell_decode(inst.g, inst.g.counters, 2, 5000 + t);
        REQUIRE(!ml.feasible.empty());
        if (ml.feasible.size() == 1) {
            ++unique_cnt;
            CHECK(mx.status == MaxwellStatus::Unique);
            CHECK(mx.estimates == ml.feasible[0]);
        } else {
            ++multiple_cnt;
            CHECK(mx.status == MaxwellStatus::Multiple);
        }
    }
    // the sample should exercise both branches
    CHECK(unique_cnt > 0);
    CHECK(multiple_cnt > 0);
}

TEST_CASE("decoders reject malformed inputs") {
    const auto g = testutil::chain_graph({2, 3});
    CHECK_THROWS_AS(bp_decode(g, {1, 2}, 2, 10), param_error);
    CHECK_THROWS_AS(bp_decode(g, g.counters, 2, 0), param_error);
}
