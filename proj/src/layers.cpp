#include "braidlab/layers.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "braidlab/errors.hpp"
#include "braidlab/quad.hpp"
#include "braidlab/scde.hpp"

namespace braidlab {

double Pmf::head_mass(i64 below) const {
    double s = 0.0;
    const i64 n = std::min<i64>(below, static_cast<i64>(p.size()));
    for (i64 i = 0; i < n; ++i) s += p[static_cast<std::size_t>(i)];
    return s;
}

namespace {

void enumerate_parts(i64 remaining, i64 parts_left, i64 min_part, std::vector<i64>& prefix,
                     std::vector<std::vector<i64>>& out) {
    if (parts_left == 0) {
        if (remaining == 0) out.push_back(prefix);
        return;
    }
    const i64 lo = prefix.empty() ? min_part : std::max(min_part, prefix.back());
    for (i64 v = lo; v * parts_left <= remaining; ++v) {
        prefix.push_back(v);
        enumerate_parts(remaining - v, parts_left - 1, min_part, prefix, out);
        prefix.pop_back();
    }
}

// Poisson(gamma) node-degree weights truncated at tail < 1e-12
std::vector<double> poisson_prior(double gamma) {
    std::vector<double> prior;
    double term = std::exp(-gamma), cum = 0.0;
    for (i64 b = 0;; ++b) {
        prior.push_back(term);
        cum += term;
        term *= gamma / static_cast<double>(b + 1);
        if (1.0 - cum < 1e-12 && static_cast<double>(b) > gamma) break;
        if (b > 100000) break;
    }
    return prior;
}

}  // namespace

std::vector<std::vector<i64>> integer_partitions(i64 a, i64 b, i64 min_part) {
    if (a < 0 || b < 1) throw param_error("integer_partitions requires a >= 0 and b >= 1");
    if (min_part < 0) throw param_error("min_part must be >= 0");
    std::vector<std::vector<i64>> out;
    if (b * min_part > a) return out;
    std::vector<i64> prefix;
    enumerate_parts(a, b, min_part, prefix, out);
    return out;
}

Pmf truncate_dist(const FlowSizeDist& dist, i64 trunc) {
    if (trunc < 1) throw param_error("trunc must be >= 1");
    Pmf out;
    out.p.assign(static_cast<std::size_t>(trunc), 0.0);
    if (dist.is_power_law()) {
        for (i64 v = 2; v < trunc; ++v)
            out.p[static_cast<std::size_t>(v)] = dist.tail(v - 1) - dist.tail(v);
        out.tail = trunc > 2 ? dist.tail(trunc - 1) : 1.0;
    } else {
        for (const auto& [v, pr] : dist.pmf()) {
            if (v < trunc)
                out.p[static_cast<std::size_t>(v)] += pr;
            else
                out.tail += pr;
        }
    }
    return out;
}

namespace {

// partition-sum form: sum over order-b partitions, multinomial-weighted
Pmf counter_dist_partitions(const Pmf& flow_pmf, const std::vector<double>& prior, i64 min_part,
                            i64 trunc) {
    auto flow_p = [&](i64 v) {
        return (v >= 0 && v < static_cast<i64>(flow_pmf.p.size())) ? flow_pmf.p[static_cast<std::size_t>(v)]
                                                                   : 0.0;
    };
    std::map<std::pair<i64, i64>, std::vector<std::vector<i64>>> memo;
    auto partitions_of = [&](i64 a, i64 b) -> const std::vector<std::vector<i64>>& {
        const auto key = std::make_pair(a, b);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        return memo.emplace(key, integer_partitions(a, b, min_part)).first->second;
    };
    std::vector<double> log_fact(prior.size() + 1, 0.0);
    for (std::size_t i = 1; i < log_fact.size(); ++i)
        log_fact[i] = log_fact[i - 1] + std::log(static_cast<double>(i));

    Pmf out;
    out.p.assign(static_cast<std::size_t>(trunc), 0.0);
    for (i64 a = 0; a < trunc; ++a) {
        double total = 0.0;
        for (std::size_t b = 0; b < prior.size(); ++b) {
            if (b == 0) {
                if (a == 0) total += prior[0];
                continue;
            }
            if (min_part > 0 && static_cast<i64>(b) * min_part > a) break;
            double cond = 0.0;
            for (const auto& part : partitions_of(a, static_cast<i64>(b))) {
                double logmult = log_fact[b];
                double prob = 1.0;
                i64 run_val = -1, run_len = 0;
                for (i64 v : part) {
                    prob *= flow_p(v);
                    if (v == run_val) {
                        ++run_len;
                    } else {
                        logmult -= log_fact[static_cast<std::size_t>(run_len)];
                        run_val = v;
                        run_len = 1;
                    }
                }
                logmult -= log_fact[static_cast<std::size_t>(run_len)];
                if (prob > 0.0) cond += std::exp(logmult) * prob;
            }
            total += prior[b] * cond;
        }
        out.p[static_cast<std::size_t>(a)] = total;
    }
    return out;
}

// convolution form of the same sum, for truncations where enumerating
// partitions is hopeless
Pmf counter_dist_convolution(const Pmf& flow_pmf, const std::vector<double>& prior, i64 trunc) {
    const std::size_t n = static_cast<std::size_t>(trunc);
    std::vector<double> conv(n, 0.0);
    conv[0] = 1.0;  // b = 0
    Pmf out;
    out.p.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) out.p[i] += prior[0] * conv[i];
    std::vector<double> next(n, 0.0);
    for (std::size_t b = 1; b < prior.size(); ++b) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double ci = conv[i];
            if (ci == 0.0) continue;
            const std::size_t lim = std::min(n - i, flow_pmf.p.size());
            for (std::size_t v = 0; v < lim; ++v) next[i + v] += ci * flow_pmf.p[v];
        }
        conv.swap(next);
        for (std::size_t i = 0; i < n; ++i) out.p[i] += prior[b] * conv[i];
    }
    return out;
}

}  // namespace

Pmf induced_counter_dist(const Pmf& flow_pmf, double gamma, i64 min_part, i64 trunc) {
    if (!(gamma > 0.0)) throw param_error("gamma must be positive");
    if (min_part < 0) throw param_error("min_part must be >= 0");
    if (trunc < 1) throw param_error("trunc must be >= 1");
    for (i64 v = 0; v < std::min<i64>(min_part, static_cast<i64>(flow_pmf.p.size())); ++v)
        if (flow_pmf.p[static_cast<std::size_t>(v)] > 0.0)
            throw param_error("flow pmf has mass below min_part");

    const auto prior = poisson_prior(gamma);
    Pmf out = (trunc <= 64) ? counter_dist_partitions(flow_pmf, prior, min_part, trunc)
                            : counter_dist_convolution(flow_pmf, prior, trunc);
    double head = 0.0;
    for (double v : out.p) head += v;
    out.tail = std::max(0.0, 1.0 - head);
    return out;
}

Pmf induced_flow_dist(const Pmf& counter_pmf, int depth) {
    if (depth < 1) throw param_error("depth must be >= 1");
    const i64 block = i64{1} << depth;
    Pmf out;
    const i64 n = static_cast<i64>(counter_pmf.p.size());
    out.p.assign(static_cast<std::size_t>((n + block - 1) / block), 0.0);
    for (i64 c = 0; c < n; ++c)
        out.p[static_cast<std::size_t>(c / block)] += counter_pmf.p[static_cast<std::size_t>(c)];
    out.tail = counter_pmf.tail;
    return out;
}

double induced_epsilon(const Pmf& counter_pmf, int depth) {
    const i64 threshold = i64{1} << (depth + 1);
    if (static_cast<i64>(counter_pmf.p.size()) < threshold)
        throw truncation_error("induced_epsilon: pmf truncated before 2^(depth+1)", threshold);
    return 1.0 - counter_pmf.head_mass(threshold);
}

FlowSizeDist dist_at_eps(const FlowSizeDist& base, double eps) {
    if (eps < 0.0 || eps >= 1.0) throw param_error("family eps must lie in [0, 1)");
    if (base.is_power_law()) {
        if (eps == 0.0) return FlowSizeDist::explicit_pmf({{2, 1.0}});
        return FlowSizeDist::power_law(-std::log2(eps));
    }
    const double eps0 = base.epsilon();
    std::map<i64, double> pmf;
    if (eps0 == 0.0) {
        if (eps > 0.0) throw param_error("cannot scale the tail of a point mass");
        for (const auto& [v, p] : base.pmf()) pmf[v] = p;
        return FlowSizeDist::explicit_pmf(pmf);
    }
    for (const auto& [v, p] : base.pmf())
        pmf[v] = (v == base.f_min()) ? 1.0 - eps : p * eps / eps0;
    return FlowSizeDist::explicit_pmf(pmf);
}

std::vector<double> induced_eps_stack(const std::vector<LayerSpec>& layers, const FlowSizeDist& dist) {
    if (layers.size() < 2) return {};
    const std::size_t L = layers.size();
    // counter pmf of layer index l is needed up to need[l]: at least
    // 2^(d_l + 1) for the induced eps, and enough blocks to feed the next
    // layer's partitions
    std::vector<i64> need(L - 1, 0);
    need[L - 2] = i64{1} << (layers[L - 2].depth + 1);
    for (std::size_t l = L - 2; l-- > 0;) {
        const i64 own = i64{1} << (layers[l].depth + 1);
        const i64 feed = (need[l + 1] + 1) << layers[l].depth;
        need[l] = std::max(own, feed);
    }
    std::vector<double> eps_i;
    Pmf flow = truncate_dist(dist, std::max<i64>(need[0], dist.f_min() + 2));
    i64 min_part = dist.f_min();
    for (std::size_t l = 0; l + 1 < L; ++l) {
        const Pmf counter = induced_counter_dist(flow, layers[l].gamma, min_part, need[l]);
        eps_i.push_back(induced_epsilon(counter, layers[l].depth));
        if (l + 2 < L) flow = induced_flow_dist(counter, layers[l].depth);
        min_part = 0;  // deeper layers include zero-size flows
    }
    return eps_i;
}

MultilayerResult multilayer_threshold(const std::vector<LayerSpec>& layers, int N, int w,
                                      const FlowSizeDist& dist, double tol) {
    if (layers.empty()) throw param_error("at least one layer required");
    MultilayerResult out;
    out.layer_thresholds.reserve(layers.size());
    for (const auto& l : layers)
        out.layer_thresholds.push_back(eps_bp_coupled(l.k, l.gamma, N, w, std::min(tol, 1e-5)));
    const double eps1 = out.layer_thresholds.front();
    if (layers.size() == 1) {
        out.threshold = eps1;
        out.layer1_binding = true;
        return out;
    }
    auto ok = [&](double eps) {
        if (eps > eps1) return false;
        const auto stack = induced_eps_stack(layers, dist_at_eps(dist, eps));
        for (std::size_t l = 0; l < stack.size(); ++l)
            if (stack[l] > out.layer_thresholds[l + 1]) return false;
        return true;
    };
    const double hi = std::min(eps1, 1.0 - 1e-9);
    if (ok(hi)) {
        out.threshold = eps1;
        out.layer1_binding = true;
    } else {
        out.threshold = bisect(ok, 0.0, hi, tol);
        out.layer1_binding = false;
    }
    out.induced_eps = induced_eps_stack(layers, dist_at_eps(dist, std::min(out.threshold, 1.0 - 1e-9)));
    return out;
}

}  // namespace braidlab
