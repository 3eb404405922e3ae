#include "braidlab/decode.hpp"

#include <algorithm>
#include <limits>

#include "braidlab/errors.hpp"

namespace braidlab {

namespace {

struct EdgeView {
    // CSR of counter-incident edges; edge ids are f*k + slot
    std::vector<i64> start;  // size m1+1
    std::vector<i64> edges;  // size E

    explicit EdgeView(const CbGraph& g) {
        start.assign(static_cast<std::size_t>(g.m1) + 1, 0);
        for (const auto& row : g.flow_adj)
            for (i64 c : row) ++start[static_cast<std::size_t>(c) + 1];
        for (std::size_t c = 1; c < start.size(); ++c) start[c] += start[c - 1];
        edges.resize(static_cast<std::size_t>(g.edge_count()));
        std::vector<i64> fill(start.begin(), start.end() - 1);
        for (i64 f = 0; f < g.m0; ++f)
            for (int s = 0; s < g.k; ++s) {
                const i64 c = g.flow_adj[f][s];
                edges[static_cast<std::size_t>(fill[static_cast<std::size_t>(c)]++)] = f * g.k + s;
            }
    }
};

void check_decode_args(const CbGraph& g, const std::vector<i64>& counters, int l_max) {
    g.validate();
    if (static_cast<i64>(counters.size()) != g.m1) throw param_error("counter vector size != m1");
    if (l_max < 1) throw param_error("l_max must be >= 1");
}

// counter rule: psi[e] = max(phi(c) - sum of mu on the other edges, f_min)
void counter_pass(const CbGraph& g, const EdgeView& ev, const std::vector<i64>& counters,
                  const std::vector<i64>& mu, i64 f_min, std::vector<i64>& psi) {
    for (i64 c = 0; c < g.m1; ++c) {
        i64 sum = 0;
        for (i64 i = ev.start[c]; i < ev.start[c + 1]; ++i) sum += mu[static_cast<std::size_t>(ev.edges[i])];
        for (i64 i = ev.start[c]; i < ev.start[c + 1]; ++i) {
            const i64 e = ev.edges[i];
            psi[static_cast<std::size_t>(e)] = std::max(counters[c] - (sum - mu[e]), f_min);
        }
    }
}

// flow rule: exclude-one min (odd) or max (even) over the flow's incoming psi
void flow_pass(const CbGraph& g, const std::vector<i64>& psi, bool odd, std::vector<i64>& mu,
               std::vector<i64>& est) {
    const int k = g.k;
    for (i64 f = 0; f < g.m0; ++f) {
        const i64 base = f * k;
        if (odd) {
            i64 m1v = std::numeric_limits<i64>::max(), m2v = m1v;
            for (int s = 0; s < k; ++s) {
                const i64 v = psi[static_cast<std::size_t>(base + s)];
                if (v < m1v) {
                    m2v = m1v;
                    m1v = v;
                } else if (v < m2v) {
                    m2v = v;
                }
            }
            for (int s = 0; s < k; ++s) {
                const i64 v = psi[static_cast<std::size_t>(base + s)];
                mu[static_cast<std::size_t>(base + s)] = (v == m1v) ? m2v : m1v;
            }
            est[static_cast<std::size_t>(f)] = m1v;
        } else {
            i64 M1v = std::numeric_limits<i64>::min(), M2v = M1v;
            for (int s = 0; s < k; ++s) {
                const i64 v = psi[static_cast<std::size_t>(base + s)];
                if (v > M1v) {
                    M2v = M1v;
                    M1v = v;
                } else if (v > M2v) {
                    M2v = v;
                }
            }
            for (int s = 0; s < k; ++s) {
                const i64 v = psi[static_cast<std::size_t>(base + s)];
                mu[static_cast<std::size_t>(base + s)] = (v == M1v) ? M2v : M1v;
            }
            est[static_cast<std::size_t>(f)] = M1v;
        }
    }
}

}  // namespace

BpResult bp_decode(const CbGraph& g, const std::vector<i64>& counters, i64 f_min, int l_max) {
    check_decode_args(g, counters, l_max);
    const EdgeView ev(g);
    const std::size_t E = static_cast<std::size_t>(g.edge_count());
    std::vector<i64> mu(E, f_min), psi(E, 0);
    std::vector<i64> est(static_cast<std::size_t>(g.m0), f_min), prev_est(est);
    std::vector<i64> lag2_odd, lag2_even;

    BpResult r;
    int l = 0;
    for (l = 1; l <= l_max; ++l) {
        counter_pass(g, ev, counters, mu, f_min, psi);
        prev_est = est;
        flow_pass(g, psi, l % 2 == 1, mu, est);
        auto& lag2 = (l % 2 == 1) ? lag2_odd : lag2_even;
        if (!lag2.empty() && lag2 == mu) {
            r.stopped = true;
            break;
        }
        lag2 = mu;
    }
    r.iterations = std::min(l, l_max);
    r.estimates = est;
    r.converged.resize(static_cast<std::size_t>(g.m0));
    for (i64 f = 0; f < g.m0; ++f) r.converged[f] = (est[f] == prev_est[f]) ? 1 : 0;
    return r;
}

std::vector<std::vector<i64>> bp_estimate_trace(const CbGraph& g, const std::vector<i64>& counters,
                                                i64 f_min, int rounds) {
    check_decode_args(g, counters, rounds);
    const EdgeView ev(g);
    const std::size_t E = static_cast<std::size_t>(g.edge_count());
    std::vector<i64> mu(E, f_min), psi(E, 0);
    std::vector<i64> est(static_cast<std::size_t>(g.m0), f_min);
    std::vector<std::vector<i64>> trace;
    trace.reserve(static_cast<std::size_t>(rounds));
    for (int l = 1; l <= rounds; ++l) {
        counter_pass(g, ev, counters, mu, f_min, psi);
        flow_pass(g, psi, l % 2 == 1, mu, est);
        trace.push_back(est);
    }
    return trace;
}

namespace {

// One equivalent-graph round: process every tree T(c) in three steps, then
// the flow side with max-only exclusion. flow_msg[e] doubles as the type-1
// message on e and as every type-2 message labeled by e's counter, because
// both exclude exactly edge e and type-2 inputs (the sentinel) never win a
// max against real messages.
struct EquivDecoder {
    const EquivGraph& eg;
    const CbGraph& g;
    const std::vector<i64>& counters;
    i64 f_min;
    std::vector<i64> flow_msg;  // per edge, flow output excluding that edge
    std::vector<i64> psi;       // per edge, root output on the type-1 edge
    std::vector<i64> up;        // scratch: depth-1 upward messages

    EquivDecoder(const EquivGraph& eg_, const CbGraph& g_, const std::vector<i64>& counters_, i64 f_min_)
        : eg(eg_), g(g_), counters(counters_), f_min(f_min_) {
        const std::size_t E = static_cast<std::size_t>(g.edge_count());
        flow_msg.assign(E, f_min);
        psi.assign(E, 0);
    }

    void counter_round() {
        for (i64 c = 0; c < g.m1; ++c) {
            const auto& tree = eg.trees[static_cast<std::size_t>(c)];
            up.resize(tree.depth1.size());
            for (std::size_t i = 0; i < tree.depth1.size(); ++i) {
                const auto& d1 = tree.depth1[i];
                // step 1: counter rule at each depth-2 node over its leaves;
                // step 2: min over the depth-1 flow's children
                i64 best = std::numeric_limits<i64>::max();
                for (const auto& d2 : d1.children) {
                    i64 sum = 0;
                    for (i64 e3 : d2.leaf_edges) sum += flow_msg[static_cast<std::size_t>(e3)];
                    const i64 v = std::max(counters[static_cast<std::size_t>(d2.counter)] - sum, f_min);
                    best = std::min(best, v);
                }
                up[i] = best;
            }
            // step 3: counter rule at the root over the depth-1 messages
            i64 total = 0;
            for (i64 v : up) total += v;
            for (std::size_t i = 0; i < tree.depth1.size(); ++i) {
                const auto& d1 = tree.depth1[i];
                psi[static_cast<std::size_t>(d1.via_edge)] =
                    std::max(counters[static_cast<std::size_t>(c)] - (total - up[i]), f_min);
            }
        }
    }

    void flow_round(std::vector<i64>& est) {
        const int k = g.k;
        for (i64 f = 0; f < g.m0; ++f) {
            const i64 base = f * k;
            i64 M1v = kNegInf, M2v = kNegInf;
            for (int s = 0; s < k; ++s) {
                const i64 v = psi[static_cast<std::size_t>(base + s)];
                if (v > M1v) {
                    M2v = M1v;
                    M1v = v;
                } else if (v > M2v) {
                    M2v = v;
                }
            }
            for (int s = 0; s < k; ++s) {
                const i64 v = psi[static_cast<std::size_t>(base + s)];
                flow_msg[static_cast<std::size_t>(base + s)] = (v == M1v) ? M2v : M1v;
            }
            est[static_cast<std::size_t>(f)] = M1v;
        }
    }
};

}  // namespace

BpResult bp_decode_equiv(const EquivGraph& eg, const CbGraph& g, const std::vector<i64>& counters,
                         i64 f_min, int l_max) {
    check_decode_args(g, counters, l_max);
    if (static_cast<i64>(eg.trees.size()) != g.m1) throw param_error("equivalent graph does not match");
    EquivDecoder dec(eg, g, counters, f_min);
    std::vector<i64> est(static_cast<std::size_t>(g.m0), f_min), prev_est(est);
    std::vector<i64> lag;

    BpResult r;
    int l = 0;
    for (l = 1; l <= l_max; ++l) {
        dec.counter_round();
        prev_est = est;
        dec.flow_round(est);
        if (!lag.empty() && lag == dec.flow_msg) {
            r.stopped = true;
            break;
        }
        lag = dec.flow_msg;
    }
    r.iterations = std::min(l, l_max);
    r.estimates = est;
    r.converged.resize(static_cast<std::size_t>(g.m0));
    // one equivalent round spans both parities, so convergence is the
    // equality of the last two rounds' estimates
    for (i64 f = 0; f < g.m0; ++f) r.converged[f] = (est[f] == prev_est[f]) ? 1 : 0;
    return r;
}

std::vector<std::vector<i64>> equiv_estimate_trace(const EquivGraph& eg, const CbGraph& g,
                                                   const std::vector<i64>& counters, i64 f_min,
                                                   int rounds) {
    check_decode_args(g, counters, rounds);
    EquivDecoder dec(eg, g, counters, f_min);
    std::vector<i64> est(static_cast<std::size_t>(g.m0), f_min);
    std::vector<std::vector<i64>> trace;
    trace.reserve(static_cast<std::size_t>(rounds));
    for (int l = 1; l <= rounds; ++l) {
        dec.counter_round();
        dec.flow_round(est);
        trace.push_back(est);
    }
    return trace;
}

PeelResult peel_decode(const CbGraph& g, const std::vector<i64>& counters, i64 f_min) {
    check_decode_args(g, counters, 1);
    const int k = g.k;
    const std::size_t E = static_cast<std::size_t>(g.edge_count());
    const EdgeView ev(g);

    PeelResult r;
    r.peeled.assign(static_cast<std::size_t>(g.m0), 0);
    r.estimates.assign(static_cast<std::size_t>(g.m0), f_min);
    r.counter_removed.assign(static_cast<std::size_t>(g.m1), 0);
    r.residual_counters = counters;

    std::vector<i64> deg = g.counter_degrees();
    std::vector<i64> mu(E, f_min), psi(E, 0), lag2_odd, lag2_even;
    std::vector<i64> stack;

    i64 alive_flows = g.m0;
    int last_peel_round = 0;

    // remove flow f with known value v: every neighbor loses the edge and v
    auto peel_flow = [&](i64 f, i64 v) {
        r.peeled[static_cast<std::size_t>(f)] = 1;
        r.estimates[static_cast<std::size_t>(f)] = v;
        --alive_flows;
        for (int s = 0; s < k; ++s) {
            const i64 c = g.flow_adj[f][s];
            if (r.counter_removed[static_cast<std::size_t>(c)]) continue;
            r.residual_counters[static_cast<std::size_t>(c)] -= v;
            if (--deg[static_cast<std::size_t>(c)] == 1) stack.push_back(c);
        }
    };

    // rule 1 cascade: degree-one counters resolve their last flow exactly
    auto drain_degree_one = [&]() {
        while (!stack.empty()) {
            const i64 c = stack.back();
            stack.pop_back();
            if (r.counter_removed[static_cast<std::size_t>(c)] || deg[static_cast<std::size_t>(c)] != 1) continue;
            i64 flow = -1;
            for (i64 i = ev.start[c]; i < ev.start[c + 1]; ++i) {
                const i64 f = ev.edges[i] / k;
                if (!r.peeled[static_cast<std::size_t>(f)]) {
                    flow = f;
                    break;
                }
            }
            const i64 value = r.residual_counters[static_cast<std::size_t>(c)];
            r.counter_removed[static_cast<std::size_t>(c)] = 1;
            deg[static_cast<std::size_t>(c)] = 0;
            peel_flow(flow, value);
        }
    };

    for (i64 c = 0; c < g.m1; ++c)
        if (deg[c] == 1) stack.push_back(c);
    if (!stack.empty()) last_peel_round = 1;
    drain_degree_one();

    const int hard_cap = 4 * static_cast<int>(g.m0) + 64;
    int l = 0;
    while (alive_flows > 0 && l < hard_cap) {
        ++l;
        // counter pass on the residual graph
        for (i64 c = 0; c < g.m1; ++c) {
            if (r.counter_removed[static_cast<std::size_t>(c)]) continue;
            i64 sum = 0;
            for (i64 i = ev.start[c]; i < ev.start[c + 1]; ++i) {
                const i64 e = ev.edges[i];
                if (!r.peeled[static_cast<std::size_t>(e / k)]) sum += mu[static_cast<std::size_t>(e)];
            }
            for (i64 i = ev.start[c]; i < ev.start[c + 1]; ++i) {
                const i64 e = ev.edges[i];
                if (r.peeled[static_cast<std::size_t>(e / k)]) continue;
                psi[static_cast<std::size_t>(e)] =
                    std::max(r.residual_counters[static_cast<std::size_t>(c)] - (sum - mu[e]), f_min);
            }
        }
        // rule 2: an odd-round upper bound of f_min pins the flow
        if (l % 2 == 1) {
            for (i64 f = 0; f < g.m0; ++f) {
                if (r.peeled[static_cast<std::size_t>(f)]) continue;
                bool hit = false;
                for (int s = 0; s < k && !hit; ++s) {
                    const i64 c = g.flow_adj[f][s];
                    if (!r.counter_removed[static_cast<std::size_t>(c)] &&
                        psi[static_cast<std::size_t>(f * k + s)] == f_min)
                        hit = true;
                }
                if (hit) {
                    peel_flow(f, f_min);
                    last_peel_round = l;
                }
            }
            if (!stack.empty()) drain_degree_one();
        }
        // flow pass on the residual graph (removed counters contribute nothing)
        for (i64 f = 0; f < g.m0; ++f) {
            if (r.peeled[static_cast<std::size_t>(f)]) continue;
            const i64 base = f * k;
            if (l % 2 == 1) {
                i64 m1v = std::numeric_limits<i64>::max(), m2v = m1v;
                int live = 0;
                for (int s = 0; s < k; ++s) {
                    const i64 c = g.flow_adj[f][s];
                    if (r.counter_removed[static_cast<std::size_t>(c)]) continue;
                    ++live;
                    const i64 v = psi[static_cast<std::size_t>(base + s)];
                    if (v < m1v) {
                        m2v = m1v;
                        m1v = v;
                    } else if (v < m2v) {
                        m2v = v;
                    }
                }
                for (int s = 0; s < k; ++s) {
                    const i64 c = g.flow_adj[f][s];
                    if (r.counter_removed[static_cast<std::size_t>(c)]) continue;
                    const i64 v = psi[static_cast<std::size_t>(base + s)];
                    mu[static_cast<std::size_t>(base + s)] = (live >= 2 && v == m1v) ? m2v : m1v;
                }
            } else {
                i64 M1v = std::numeric_limits<i64>::min(), M2v = M1v;
                int live = 0;
                for (int s = 0; s < k; ++s) {
                    const i64 c = g.flow_adj[f][s];
                    if (r.counter_removed[static_cast<std::size_t>(c)]) continue;
                    ++live;
                    const i64 v = psi[static_cast<std::size_t>(base + s)];
                    if (v > M1v) {
                        M2v = M1v;
                        M1v = v;
                    } else if (v > M2v) {
                        M2v = v;
                    }
                }
                for (int s = 0; s < k; ++s) {
                    const i64 c = g.flow_adj[f][s];
                    if (r.counter_removed[static_cast<std::size_t>(c)]) continue;
                    const i64 v = psi[static_cast<std::size_t>(base + s)];
                    mu[static_cast<std::size_t>(base + s)] = (live >= 2 && v == M1v) ? M2v : M1v;
                }
            }
        }
        // stop once a full parity period passed with no peel and the message
        // state locked into its period-2 cycle
        auto& lag2 = (l % 2 == 1) ? lag2_odd : lag2_even;
        if (l - last_peel_round >= 2 && !lag2.empty() && lag2 == mu) break;
        lag2 = mu;
    }
    r.iterations = l;
    return r;
}

CbGraph PeelResult::residual_graph(const CbGraph& g, std::vector<i64>* flow_map,
                                   std::vector<i64>* counter_map) const {
    std::vector<i64> fmap, cmap;
    std::vector<i64> fidx(static_cast<std::size_t>(g.m0), -1), cidx(static_cast<std::size_t>(g.m1), -1);
    for (i64 f = 0; f < g.m0; ++f)
        if (!peeled[static_cast<std::size_t>(f)]) {
            fidx[static_cast<std::size_t>(f)] = static_cast<i64>(fmap.size());
            fmap.push_back(f);
        }
    for (i64 c = 0; c < g.m1; ++c)
        if (!counter_removed[static_cast<std::size_t>(c)]) {
            cidx[static_cast<std::size_t>(c)] = static_cast<i64>(cmap.size());
            cmap.push_back(c);
        }
    CbGraph res;
    res.k = g.k;
    res.m0 = static_cast<i64>(fmap.size());
    res.m1 = static_cast<i64>(cmap.size());
    res.seed = g.seed;
    res.flow_adj.resize(static_cast<std::size_t>(res.m0));
    for (i64 f = 0; f < res.m0; ++f) {
        for (i64 c : g.flow_adj[static_cast<std::size_t>(fmap[f])])
            res.flow_adj[f].push_back(cidx[static_cast<std::size_t>(c)]);
    }
    res.counters.resize(static_cast<std::size_t>(res.m1));
    for (i64 c = 0; c < res.m1; ++c)
        res.counters[c] = residual_counters[static_cast<std::size_t>(cmap[c])];
    if (flow_map) *flow_map = std::move(fmap);
    if (counter_map) *counter_map = std::move(cmap);
    return res;
}

namespace {

struct MlSearch {
    const CbGraph& g;
    const std::vector<i64>& counters;
    i64 f_min;
    std::size_t max_solutions;
    std::uint64_t node_cap;
    std::uint64_t nodes = 0;

    std::vector<i64> rem;        // remaining counter capacity
    std::vector<i64> pending;    // unassigned edge instances per counter
    std::vector<i64> assign;
    MlResult out;

    MlSearch(const CbGraph& g_, const std::vector<i64>& c_, i64 f_, std::size_t ms, std::uint64_t nc)
        : g(g_), counters(c_), f_min(f_), max_solutions(ms), node_cap(nc) {
        rem = counters;
        pending.assign(static_cast<std::size_t>(g.m1), 0);
        for (const auto& row : g.flow_adj)
            for (i64 c : row) ++pending[static_cast<std::size_t>(c)];
        assign.assign(static_cast<std::size_t>(g.m0), 0);
    }

    void dfs(i64 f) {
        if (++nodes > node_cap) throw resource_error("ml_oracle search cap exceeded");
        if (f == g.m0) {
            out.feasible.push_back(assign);
            i64 sum = 0;
            for (i64 v : assign) sum += v;
            if (out.best.empty() || sum > out.best_sum) {
                out.best_sum = sum;
                out.best = assign;
            }
            return;
        }
        // multiplicity of each counter among this flow's edges
        i64 vmax = std::numeric_limits<i64>::max();
        for (i64 c : g.flow_adj[f]) {
            const std::size_t ci = static_cast<std::size_t>(c);
            // other pending edges of c need at least f_min each
            const i64 others = pending[ci];  // includes this flow's instances
            i64 mult = 0;
            for (i64 cc : g.flow_adj[f])
                if (cc == c) ++mult;
            const i64 cap = (rem[ci] - (others - mult) * f_min) / mult;
            vmax = std::min(vmax, cap);
        }
        if (vmax < f_min) return;
        for (i64 v = f_min; v <= vmax; ++v) {
            bool ok = true;
            for (i64 c : g.flow_adj[f]) {
                const std::size_t ci = static_cast<std::size_t>(c);
                rem[ci] -= v;
                --pending[ci];
                if (rem[ci] < pending[ci] * f_min || (pending[ci] == 0 && rem[ci] != 0)) ok = false;
            }
            if (ok) {
                assign[static_cast<std::size_t>(f)] = v;
                dfs(f + 1);
                if (out.feasible.size() >= max_solutions) {
                    out.capped = true;
                    // restore before bailing out
                    for (i64 c : g.flow_adj[f]) {
                        rem[static_cast<std::size_t>(c)] += v;
                        ++pending[static_cast<std::size_t>(c)];
                    }
                    return;
                }
            }
            for (i64 c : g.flow_adj[f]) {
                rem[static_cast<std::size_t>(c)] += v;
                ++pending[static_cast<std::size_t>(c)];
            }
        }
    }
};

}  // namespace

MlResult ml_oracle(const CbGraph& g, const std::vector<i64>& counters, i64 f_min,
                   std::size_t max_solutions, std::uint64_t node_cap) {
    check_decode_args(g, counters, 1);
    MlSearch s(g, counters, f_min, max_solutions, node_cap);
    s.dfs(0);
    return std::move(s.out);
}

}  // namespace braidlab
