#include "braidlab/maxwell.hpp"

#include <algorithm>
#include <limits>

#include "braidlab/decode.hpp"
#include "braidlab/errors.hpp"
#include "braidlab/rng.hpp"

namespace braidlab {

GuessExpr GuessExpr::from_counter(i64 counter_value, const std::vector<const GuessExpr*>& incoming) {
    GuessExpr out;
    out.K = counter_value;
    for (const auto* in : incoming) {
        out.K -= in->K;
        for (const auto& [f, b] : in->terms) out.terms[f] -= b;  // sum of coefficients times -1
    }
    for (auto it = out.terms.begin(); it != out.terms.end();)
        it = (it->second == 0) ? out.terms.erase(it) : std::next(it);
    return out;
}

i64 GuessExpr::eval(const std::map<i64, i64>& assignment) const {
    i64 v = K;
    for (const auto& [f, b] : terms) v -= b * assignment.at(f);
    return v;
}

namespace {

enum class Tag : std::uint8_t { Known, Unknown, Guessed };

struct MaxwellEngine {
    const CbGraph& g;
    const std::vector<i64>& counters;
    const i64 f_min;
    const int k;
    const std::size_t E;
    std::vector<std::vector<i64>> cedges;  // per counter, incident edge ids

    std::vector<i64> mu1, psi1, mu1_prev;
    std::vector<Tag> mu_tag, psi_tag;
    std::vector<GuessExpr> mu_expr, psi_expr;  // valid when the tag is Known or Guessed
    std::vector<i64> est, prev_est;

    std::vector<FlowLabel> label;
    std::vector<i64> known_value;
    std::vector<GuessExpr> flow_expr;

    MaxwellEngine(const CbGraph& g_, const std::vector<i64>& counters_, i64 f_min_)
        : g(g_), counters(counters_), f_min(f_min_), k(g_.k), E(static_cast<std::size_t>(g_.edge_count())) {
        cedges = g.counter_edges();
        mu1.assign(E, f_min);
        mu1_prev.assign(E, f_min);
        psi1.assign(E, 0);
        mu_tag.assign(E, Tag::Unknown);
        psi_tag.assign(E, Tag::Unknown);
        mu_expr.resize(E);
        psi_expr.resize(E);
        est.assign(static_cast<std::size_t>(g.m0), f_min);
        prev_est = est;
        label.assign(static_cast<std::size_t>(g.m0), FlowLabel::Unknown);
        known_value.assign(static_cast<std::size_t>(g.m0), f_min);
        flow_expr.resize(static_cast<std::size_t>(g.m0));
    }

    void counter_pass() {
        for (i64 c = 0; c < g.m1; ++c) {
            const auto& edges = cedges[static_cast<std::size_t>(c)];
            i64 sum = 0;
            int unknown = 0, guessed = 0;
            for (i64 e : edges) {
                sum += mu1[static_cast<std::size_t>(e)];
                if (mu_tag[static_cast<std::size_t>(e)] == Tag::Unknown)
                    ++unknown;
                else if (mu_tag[static_cast<std::size_t>(e)] == Tag::Guessed)
                    ++guessed;
            }
            for (i64 e : edges) {
                const std::size_t ei = static_cast<std::size_t>(e);
                psi1[ei] = std::max(counters[static_cast<std::size_t>(c)] - (sum - mu1[ei]), f_min);
                const int u = unknown - (mu_tag[ei] == Tag::Unknown ? 1 : 0);
                const int gg = guessed - (mu_tag[ei] == Tag::Guessed ? 1 : 0);
                if (u > 0) {
                    psi_tag[ei] = Tag::Unknown;
                } else {
                    // all other inputs carry expressions; compose them
                    std::vector<const GuessExpr*> in;
                    in.reserve(edges.size() - 1);
                    for (i64 e2 : edges)
                        if (e2 != e) in.push_back(&mu_expr[static_cast<std::size_t>(e2)]);
                    psi_expr[ei] = GuessExpr::from_counter(counters[static_cast<std::size_t>(c)], in);
                    psi_tag[ei] = (gg > 0) ? Tag::Guessed : Tag::Known;
                }
            }
        }
    }

    void flow_pass(bool odd) {
        mu1_prev = mu1;
        prev_est = est;
        for (i64 f = 0; f < g.m0; ++f) {
            const i64 base = f * k;
            // value component: plain BP exclude-one extremum
            i64 b1 = odd ? std::numeric_limits<i64>::max() : std::numeric_limits<i64>::min();
            i64 b2 = b1;
            for (int s = 0; s < k; ++s) {
                const i64 v = psi1[static_cast<std::size_t>(base + s)];
                if (odd ? (v < b1) : (v > b1)) {
                    b2 = b1;
                    b1 = v;
                } else if (odd ? (v < b2) : (v > b2)) {
                    b2 = v;
                }
            }
            est[static_cast<std::size_t>(f)] = b1;
            int zero_edges = 0, guess_edges = 0;
            for (int s = 0; s < k; ++s) {
                const std::size_t ei = static_cast<std::size_t>(base + s);
                if (psi_tag[ei] == Tag::Known) ++zero_edges;
                if (psi_tag[ei] == Tag::Guessed) ++guess_edges;
            }
            for (int s = 0; s < k; ++s) {
                const std::size_t ei = static_cast<std::size_t>(base + s);
                const i64 v = psi1[ei];
                mu1[ei] = (v == b1) ? b2 : b1;
                if (label[static_cast<std::size_t>(f)] == FlowLabel::Guessed) {
                    mu_tag[ei] = Tag::Guessed;
                    mu_expr[ei] = flow_expr[static_cast<std::size_t>(f)];
                    continue;
                }
                const int z = zero_edges - (psi_tag[ei] == Tag::Known ? 1 : 0);
                const int gg = guess_edges - (psi_tag[ei] == Tag::Guessed ? 1 : 0);
                if (z > 0 || mu1[ei] == mu1_prev[ei]) {
                    // the extrinsic value is pinned (or a neighbor pinned us):
                    // this edge now carries an exact constant
                    if (mu_tag[ei] != Tag::Known) {
                        mu_tag[ei] = Tag::Known;
                        mu_expr[ei].terms.clear();
                        if (label[static_cast<std::size_t>(f)] == FlowLabel::Known)
                            mu_expr[ei].K = known_value[static_cast<std::size_t>(f)];
                        else if (z > 0) {
                            for (int s2 = 0; s2 < k; ++s2) {
                                const std::size_t e2 = static_cast<std::size_t>(base + s2);
                                if (s2 != s && psi_tag[e2] == Tag::Known) {
                                    mu_expr[ei].K = psi_expr[e2].K;
                                    break;
                                }
                            }
                        } else {
                            mu_expr[ei].K = mu1[ei];
                        }
                    }
                } else if (gg > 0) {
                    mu_tag[ei] = Tag::Guessed;
                    for (int s2 = 0; s2 < k; ++s2) {
                        const std::size_t e2 = static_cast<std::size_t>(base + s2);
                        if (s2 != s && psi_tag[e2] == Tag::Guessed) {
                            mu_expr[ei] = psi_expr[e2];
                            break;
                        }
                    }
                } else {
                    mu_tag[ei] = Tag::Unknown;
                }
            }
        }
    }

    void update_labels() {
        for (i64 f = 0; f < g.m0; ++f) {
            const std::size_t fi = static_cast<std::size_t>(f);
            if (label[fi] == FlowLabel::Known) continue;
            const i64 base = f * k;
            // exact value established either by estimate stabilization or by
            // a counter whose other flows are all pinned
            i64 value = 0;
            bool known = false;
            if (est[fi] == prev_est[fi]) {
                known = true;
                value = est[fi];
            } else {
                for (int s = 0; s < k && !known; ++s) {
                    const std::size_t ei = static_cast<std::size_t>(base + s);
                    if (psi_tag[ei] == Tag::Known) {
                        known = true;
                        value = psi_expr[ei].K;
                    }
                }
            }
            if (known && label[fi] != FlowLabel::Guessed) {
                label[fi] = FlowLabel::Known;
                known_value[fi] = value;
                continue;
            }
            if (label[fi] == FlowLabel::Unknown) {
                for (int s = 0; s < k; ++s) {
                    const std::size_t ei = static_cast<std::size_t>(base + s);
                    if (psi_tag[ei] == Tag::Guessed) {
                        label[fi] = FlowLabel::Expressed;
                        flow_expr[fi] = psi_expr[ei];
                        break;
                    }
                }
            }
        }
    }
};

struct SystemSolver {
    SystemSolver(const CbGraph& g_, const std::vector<i64>& counters_, i64 f_min_, std::uint64_t cap)
        : g(g_), counters(counters_), f_min(f_min_), node_cap(cap) {}

    const CbGraph& g;
    const std::vector<i64>& counters;
    i64 f_min;
    std::uint64_t node_cap;
    std::uint64_t nodes = 0;

    std::vector<i64> vars;                 // flow ids acting as free variables
    std::map<i64, std::size_t> var_index;
    std::vector<LinearEq> equations;
    bool contradictory = false;

    // up to two solutions, as assignments over vars
    std::vector<std::vector<i64>> solutions;

    void build(const std::vector<FlowLabel>& label, const std::vector<i64>& known_value,
               const std::vector<GuessExpr>& flow_expr) {
        for (i64 f = 0; f < g.m0; ++f)
            if (label[static_cast<std::size_t>(f)] == FlowLabel::Guessed ||
                label[static_cast<std::size_t>(f)] == FlowLabel::Unknown) {
                var_index[f] = vars.size();
                vars.push_back(f);
            }
        std::map<std::pair<std::vector<std::pair<i64, i64>>, i64>, bool> seen;
        equations.resize(static_cast<std::size_t>(g.m1));
        for (i64 c = 0; c < g.m1; ++c) equations[static_cast<std::size_t>(c)].rhs = counters[static_cast<std::size_t>(c)];
        for (i64 f = 0; f < g.m0; ++f) {
            const std::size_t fi = static_cast<std::size_t>(f);
            for (i64 c : g.flow_adj[fi]) {
                LinearEq& eq = equations[static_cast<std::size_t>(c)];
                switch (label[fi]) {
                    case FlowLabel::Known:
                        eq.rhs -= known_value[fi];
                        break;
                    case FlowLabel::Guessed:
                    case FlowLabel::Unknown:
                        eq.coeff[f] += 1;
                        break;
                    case FlowLabel::Expressed: {
                        // phi(f) = K - sum b*x contributes -b per variable
                        const GuessExpr& ex = flow_expr[fi];
                        eq.rhs -= ex.K;
                        for (const auto& [fg, b] : ex.terms) eq.coeff[fg] -= b;
                        break;
                    }
                }
            }
        }
        std::vector<LinearEq> kept;
        for (auto& eq : equations) {
            for (auto it = eq.coeff.begin(); it != eq.coeff.end();)
                it = (it->second == 0) ? eq.coeff.erase(it) : std::next(it);
            if (eq.coeff.empty()) {
                if (eq.rhs != 0) contradictory = true;
                continue;
            }
            auto key = std::make_pair(std::vector<std::pair<i64, i64>>(eq.coeff.begin(), eq.coeff.end()), eq.rhs);
            if (!seen.emplace(key, true).second) continue;
            kept.push_back(eq);
        }
        equations = std::move(kept);
    }

    bool feasible_leaf(const std::map<i64, i64>& assignment, const std::vector<FlowLabel>& label,
                       const std::vector<GuessExpr>& flow_expr) const {
        for (i64 f = 0; f < g.m0; ++f)
            if (label[static_cast<std::size_t>(f)] == FlowLabel::Expressed &&
                flow_expr[static_cast<std::size_t>(f)].eval(assignment) < f_min)
                return false;
        return true;
    }

    void solve(const std::vector<FlowLabel>& label, const std::vector<GuessExpr>& flow_expr) {
        if (contradictory) return;
        if (vars.empty()) {
            if (equations.empty()) solutions.push_back({});
            return;
        }
        // per-variable upper bound from counter capacities
        const auto deg = g.counter_degrees();
        std::vector<i64> ub(vars.size());
        for (std::size_t i = 0; i < vars.size(); ++i) {
            const i64 f = vars[i];
            i64 best = std::numeric_limits<i64>::max();
            for (i64 c : g.flow_adj[static_cast<std::size_t>(f)]) {
                i64 mult = 0;
                for (i64 c2 : g.flow_adj[static_cast<std::size_t>(f)])
                    if (c2 == c) ++mult;
                const i64 cap =
                    (counters[static_cast<std::size_t>(c)] - (deg[static_cast<std::size_t>(c)] - mult) * f_min) /
                    mult;
                best = std::min(best, cap);
            }
            ub[i] = best;
        }
        std::vector<i64> assign(vars.size(), 0);
        std::map<i64, i64> amap;
        dfs(0, ub, assign, amap, label, flow_expr);
    }

    void dfs(std::size_t i, const std::vector<i64>& ub, std::vector<i64>& assign, std::map<i64, i64>& amap,
             const std::vector<FlowLabel>& label, const std::vector<GuessExpr>& flow_expr) {
        if (++nodes > node_cap) throw resource_error("maxwell system search cap exceeded");
        if (solutions.size() >= 2) return;
        if (i == vars.size()) {
            for (const auto& eq : equations) {
                i64 lhs = 0;
                for (const auto& [f, b] : eq.coeff) lhs += b * amap.at(f);
                if (lhs != eq.rhs) return;
            }
            if (!feasible_leaf(amap, label, flow_expr)) return;
            solutions.push_back(assign);
            return;
        }
        for (i64 v = f_min; v <= ub[i]; ++v) {
            assign[i] = v;
            amap[vars[i]] = v;
            bool ok = true;
            // propagate: any fully assigned equation must balance
            for (const auto& eq : equations) {
                i64 lhs = 0;
                bool complete = true;
                for (const auto& [f, b] : eq.coeff) {
                    auto it = amap.find(f);
                    if (it == amap.end()) {
                        complete = false;
                        break;
                    }
                    lhs += b * it->second;
                }
                if (complete && lhs != eq.rhs) {
                    ok = false;
                    break;
                }
            }
            if (ok) dfs(i + 1, ub, assign, amap, label, flow_expr);
            amap.erase(vars[i]);
            if (solutions.size() >= 2) return;
        }
    }
};

}  // namespace

MaxwellResult maxwell_decode(const CbGraph& g, const std::vector<i64>& counters, i64 f_min,
                             std::uint64_t seed, std::uint64_t node_cap) {
    g.validate();
    if (static_cast<i64>(counters.size()) != g.m1) throw param_error("counter vector size != m1");

    MaxwellEngine eng(g, counters, f_min);
    SplitMix64 rng(seed);
    MaxwellResult res;

    const int round_cap = 2 * static_cast<int>(g.m0) + 64;
    int round = 0;
    std::vector<i64> lag2_odd, lag2_even;
    std::vector<Tag> prev_tags;
    int stable_rounds = 0;

    while (true) {
        ++round;
        eng.counter_pass();
        eng.flow_pass(round % 2 == 1);
        eng.update_labels();

        bool msgs_locked = false;
        auto& lag2 = (round % 2 == 1) ? lag2_odd : lag2_even;
        if (!lag2.empty() && lag2 == eng.mu1) msgs_locked = true;
        lag2 = eng.mu1;
        if (msgs_locked && prev_tags == eng.mu_tag)
            ++stable_rounds;
        else
            stable_rounds = 0;
        prev_tags = eng.mu_tag;

        if (stable_rounds >= 2 || round >= round_cap) {
            std::vector<i64> unknown;
            for (i64 f = 0; f < g.m0; ++f)
                if (eng.label[static_cast<std::size_t>(f)] == FlowLabel::Unknown) unknown.push_back(f);
            if (unknown.empty() || round >= round_cap) break;
            const i64 pick = unknown[rng.bounded(unknown.size())];
            eng.label[static_cast<std::size_t>(pick)] = FlowLabel::Guessed;
            GuessExpr self;
            self.terms[pick] = -1;
            self.K = 0;
            eng.flow_expr[static_cast<std::size_t>(pick)] = self;
            res.guess_order.push_back(pick);
            stable_rounds = 0;
        }
    }

    SystemSolver solver(g, counters, f_min, node_cap);
    solver.build(eng.label, eng.known_value, eng.flow_expr);
    solver.solve(eng.label, eng.flow_expr);

    res.labels = eng.label;
    res.exprs = eng.flow_expr;
    res.equations = solver.equations;
    res.search_nodes = solver.nodes;
    res.solutions_found = static_cast<int>(solver.solutions.size());
    res.estimates.assign(static_cast<std::size_t>(g.m0), f_min);
    for (i64 f = 0; f < g.m0; ++f)
        if (eng.label[static_cast<std::size_t>(f)] == FlowLabel::Known)
            res.estimates[static_cast<std::size_t>(f)] = eng.known_value[static_cast<std::size_t>(f)];

    if (solver.contradictory || solver.solutions.empty()) {
        res.status = MaxwellStatus::Inconsistent;
    } else if (solver.solutions.size() >= 2) {
        res.status = MaxwellStatus::Multiple;
    } else {
        res.status = MaxwellStatus::Unique;
        std::map<i64, i64> amap;
        for (std::size_t i = 0; i < solver.vars.size(); ++i) amap[solver.vars[i]] = solver.solutions[0][i];
        for (i64 f = 0; f < g.m0; ++f) {
            const std::size_t fi = static_cast<std::size_t>(f);
            switch (eng.label[fi]) {
                case FlowLabel::Known:
                    res.estimates[fi] = eng.known_value[fi];
                    break;
                case FlowLabel::Guessed:
                case FlowLabel::Unknown:
                    res.estimates[fi] = amap.at(f);
                    break;
                case FlowLabel::Expressed:
                    res.estimates[fi] = eng.flow_expr[fi].eval(amap);
                    break;
            }
        }
    }
    return res;
}

}  // namespace braidlab
