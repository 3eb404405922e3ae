#include "braidlab/graph.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "braidlab/errors.hpp"
#include "braidlab/rng.hpp"
#include "json.hpp"

namespace braidlab {

void EnsembleParams::validate() const {
    if (k < 2) throw param_error("flow degree k must be >= 2");
    if (m0 < 1) throw param_error("m0 must be >= 1");
    if (m1 < 1) throw param_error("m1 must be >= 1");
}

void ScParams::validate(int k) const {
    if (N < 1) throw param_error("coupling length N must be >= 1");
    if (w < 1 || w > N + 1) throw param_error("smoothing parameter w must satisfy 1 <= w <= N+1");
    if (kappa < 1) throw param_error("kappa must be >= 1");
    if ((kappa * k) % w != 0) throw param_error("kappa*k must be divisible by w (equal socket subgroups)");
}

std::vector<std::vector<i64>> CbGraph::counter_edges() const {
    std::vector<std::vector<i64>> ce(static_cast<std::size_t>(m1));
    for (i64 f = 0; f < m0; ++f)
        for (int s = 0; s < k; ++s) ce[static_cast<std::size_t>(flow_adj[f][s])].push_back(f * k + s);
    return ce;
}

std::vector<i64> CbGraph::counter_degrees() const {
    std::vector<i64> deg(static_cast<std::size_t>(m1), 0);
    for (const auto& row : flow_adj)
        for (i64 c : row) ++deg[static_cast<std::size_t>(c)];
    return deg;
}

void CbGraph::validate() const {
    if (k < 2) throw param_error("graph has k < 2");
    if (static_cast<i64>(flow_adj.size()) != m0) throw param_error("flow_adj size != m0");
    for (const auto& row : flow_adj) {
        if (static_cast<int>(row.size()) != k) throw param_error("flow with degree != k");
        for (i64 c : row)
            if (c < 0 || c >= m1) throw param_error("counter index out of range");
    }
    if (static_cast<i64>(counters.size()) != m1) throw param_error("counters size != m1");
    if (!flow_pos.empty()) {
        if (static_cast<i64>(flow_pos.size()) != m0 || static_cast<i64>(counter_pos.size()) != m1)
            throw param_error("coupling position labels have wrong size");
        for (i64 f = 0; f < m0; ++f)
            for (i64 c : flow_adj[f]) {
                const int d = counter_pos[static_cast<std::size_t>(c)] - flow_pos[static_cast<std::size_t>(f)];
                if (d < 0) throw param_error("edge violates coupling window (counter left of flow)");
            }
    }
}

CbGraph sample_graph(const EnsembleParams& params, std::uint64_t seed) {
    params.validate();
    SplitMix64 rng(seed);
    CbGraph g;
    g.k = params.k;
    g.m0 = params.m0;
    g.m1 = params.m1;
    g.seed = seed;
    g.flow_adj.assign(static_cast<std::size_t>(params.m0), std::vector<i64>(params.k));
    for (i64 f = 0; f < params.m0; ++f)
        for (int s = 0; s < params.k; ++s)
            g.flow_adj[f][s] = static_cast<i64>(rng.bounded(static_cast<std::uint64_t>(params.m1)));
    g.counters.assign(static_cast<std::size_t>(params.m1), 0);
    return g;
}

CbGraph sample_coupled_graph(int k, double gamma, const ScParams& sc, std::uint64_t seed) {
    if (k < 2) throw param_error("flow degree k must be >= 2");
    if (gamma <= 0.0) throw param_error("gamma must be positive");
    sc.validate(k);

    const int M = sc.M();
    const i64 per_pos = std::max<i64>(1, std::llround(static_cast<double>(sc.kappa) * k / gamma));
    const i64 sockets = sc.kappa * k;
    const i64 sub = sockets / sc.w;

    CbGraph g;
    g.k = k;
    g.m0 = static_cast<i64>(sc.N) * sc.kappa;
    g.m1 = static_cast<i64>(M) * per_pos;
    g.seed = seed;
    g.flow_adj.assign(static_cast<std::size_t>(g.m0), std::vector<i64>(k));
    g.counters.assign(static_cast<std::size_t>(g.m1), 0);
    g.flow_pos.resize(static_cast<std::size_t>(g.m0));
    g.counter_pos.resize(static_cast<std::size_t>(g.m1));
    for (i64 c = 0; c < g.m1; ++c) g.counter_pos[c] = static_cast<int>(c / per_pos) + 1;

    SplitMix64 rng(seed);
    std::vector<i64> perm(static_cast<std::size_t>(sockets));
    for (int n = 0; n < sc.N; ++n) {
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        for (i64 s = 0; s < sockets; ++s) {
            const i64 flow = static_cast<i64>(n) * sc.kappa + s / k;
            const int slot = static_cast<int>(s % k);
            const int subgroup = static_cast<int>(perm[s] / sub);  // 0..w-1
            const int cpos = n + subgroup;                         // 0-based counter position
            const i64 counter = static_cast<i64>(cpos) * per_pos +
                                static_cast<i64>(rng.bounded(static_cast<std::uint64_t>(per_pos)));
            g.flow_adj[flow][slot] = counter;
        }
        for (i64 f = static_cast<i64>(n) * sc.kappa; f < static_cast<i64>(n + 1) * sc.kappa; ++f)
            g.flow_pos[f] = n + 1;
    }
    return g;
}

EquivGraph build_equivalent_graph(const CbGraph& g) {
    g.validate();
    const auto ce = g.counter_edges();
    EquivGraph eg;
    eg.trees.resize(static_cast<std::size_t>(g.m1));
    for (i64 c = 0; c < g.m1; ++c) {
        auto& tree = eg.trees[c];
        tree.depth1.reserve(ce[c].size());
        for (i64 e1 : ce[c]) {
            EquivGraph::Depth1 d1;
            d1.flow = e1 / g.k;
            d1.via_edge = e1;
            ++eg.type1_edges;
            // continue over the flow's other edges (other edge instances of a
            // multi-edge included)
            for (int s = 0; s < g.k; ++s) {
                const i64 e2 = d1.flow * g.k + s;
                if (e2 == e1) continue;
                EquivGraph::Depth2 d2;
                d2.counter = g.flow_adj[d1.flow][s];
                d2.via_edge = e2;
                for (i64 e3 : ce[static_cast<std::size_t>(d2.counter)]) {
                    if (e3 == e2) continue;
                    d2.leaf_edges.push_back(e3);
                    ++eg.type2_edges;
                }
                d1.children.push_back(std::move(d2));
            }
            tree.depth1.push_back(std::move(d1));
        }
    }
    return eg;
}

std::string graph_to_json(const CbGraph& g) {
    nlohmann::json j;
    j["m0"] = g.m0;
    j["m1"] = g.m1;
    j["k"] = g.k;
    j["seed"] = g.seed;
    j["flow_adj"] = g.flow_adj;
    if (g.coupled()) {
        j["positions"] = {{"flow", g.flow_pos}, {"counter", g.counter_pos}};
    }
    return j.dump();
}

CbGraph graph_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CbGraph g;
    g.m0 = j.at("m0").get<i64>();
    g.m1 = j.at("m1").get<i64>();
    g.k = j.at("k").get<int>();
    g.seed = j.value("seed", std::uint64_t{0});
    g.flow_adj = j.at("flow_adj").get<std::vector<std::vector<i64>>>();
    if (j.contains("positions")) {
        g.flow_pos = j["positions"].at("flow").get<std::vector<int>>();
        g.counter_pos = j["positions"].at("counter").get<std::vector<int>>();
    }
    g.counters.assign(static_cast<std::size_t>(g.m1), 0);
    g.validate();
    return g;
}

void save_graph(const CbGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw param_error("cannot open " + path + " for writing");
    out << graph_to_json(g) << '\n';
}

CbGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw param_error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return graph_from_json(text);
}

}  // namespace braidlab
