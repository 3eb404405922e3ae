#include "braidlab/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "braidlab/codec.hpp"
#include "braidlab/decode.hpp"
#include "braidlab/errors.hpp"
#include "braidlab/maxwell.hpp"
#include "braidlab/rng.hpp"
#include "braidlab/scde.hpp"

namespace braidlab {

void SimConfig::validate() const {
    if (k < 2) throw param_error("k must be >= 2");
    if (!(beta > 0.0)) throw param_error("beta must be positive");
    if (m0 < 1) throw param_error("m0 must be >= 1");
    if (trials < 1) throw param_error("trials must be >= 1");
    if (l_max < 1) throw param_error("l_max must be >= 1");
    if (N.has_value() != w.has_value()) throw param_error("N and w must be given together");
    if (coupled()) {
        if (*w < 1 || *w > *N + 1) throw param_error("w must satisfy 1 <= w <= N+1");
        if (m0 % *N != 0) throw param_error("m0 must be divisible by N (kappa flows per position)");
    }
    if (decoder == DecoderKind::Maxwell && m0 > maxwell_m0_cap)
        throw resource_error("maxwell decoding capped at m0 <= " + std::to_string(maxwell_m0_cap));
}

std::pair<double, double> wilson_interval(i64 errors, i64 total) {
    if (total <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;  // 95%
    const double n = static_cast<double>(total);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

int default_threads() {
    if (const char* env = std::getenv("BRAIDLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;
}

namespace {

i64 gcd_i64(i64 a, i64 b) { return b == 0 ? a : gcd_i64(b, a % b); }

// the socket interleaver needs kappa*k divisible by w; bump kappa to the next
// feasible value (the effective m0 is reported in SimResult)
i64 effective_kappa(const SimConfig& cfg) {
    const i64 kappa = cfg.m0 / *cfg.N;
    const i64 w = *cfg.w;
    if ((kappa * cfg.k) % w == 0) return kappa;
    const i64 step = w / gcd_i64(cfg.k, w);
    return ((kappa + step - 1) / step) * step;
}

i64 effective_m0(const SimConfig& cfg) {
    return cfg.coupled() ? effective_kappa(cfg) * *cfg.N : cfg.m0;
}

CbGraph make_graph(const SimConfig& cfg, std::uint64_t seed) {
    if (cfg.coupled()) {
        ScParams sc;
        sc.N = *cfg.N;
        sc.w = *cfg.w;
        sc.kappa = effective_kappa(cfg);
        // beta is the design-rate value of the terminated chain; invert it
        const double gamma = gamma_for_beta_c(cfg.k, cfg.beta, sc.N, sc.w);
        return sample_coupled_graph(cfg.k, gamma, sc, seed);
    }
    EnsembleParams p;
    p.k = cfg.k;
    p.m0 = cfg.m0;
    p.m1 = std::max<i64>(1, std::llround(cfg.beta * static_cast<double>(cfg.m0)));
    return sample_graph(p, seed);
}

i64 run_one_trial(const SimConfig& cfg, std::uint64_t trial_seed) {
    const CbGraph g = make_graph(cfg, SplitMix64::derive(trial_seed, 1));
    const std::vector<i64> flows = sample_flow_sizes(cfg.dist, g.m0, SplitMix64::derive(trial_seed, 2));
    // exact counters: depths are assumed large enough not to overflow
    std::vector<i64> counters(static_cast<std::size_t>(g.m1), 0);
    for (i64 f = 0; f < g.m0; ++f)
        for (i64 c : g.flow_adj[f]) counters[static_cast<std::size_t>(c)] += flows[f];

    const i64 f_min = cfg.dist.f_min();
    i64 errors = 0;
    switch (cfg.decoder) {
        case DecoderKind::Bp: {
            const auto r = bp_decode(g, counters, f_min, cfg.l_max);
            for (i64 f = 0; f < g.m0; ++f)
                if (!r.converged[f] || r.estimates[f] != flows[f]) ++errors;
            break;
        }
        case DecoderKind::Peel: {
            const auto r = peel_decode(g, counters, f_min);
            for (i64 f = 0; f < g.m0; ++f)
                if (!r.peeled[f] || r.estimates[f] != flows[f]) ++errors;
            break;
        }
        case DecoderKind::Maxwell: {
            const auto r = maxwell_decode(g, counters, f_min, SplitMix64::derive(trial_seed, 3));
            if (r.status != MaxwellStatus::Unique) {
                // count the flows the value-passing part pinned correctly;
                // everything else is an error
                for (i64 f = 0; f < g.m0; ++f)
                    if (r.labels[f] != FlowLabel::Known || r.estimates[f] != flows[f]) ++errors;
            } else {
                for (i64 f = 0; f < g.m0; ++f)
                    if (r.estimates[f] != flows[f]) ++errors;
            }
            break;
        }
    }
    return errors;
}

}  // namespace

SimResult run_ser(const SimConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();

    SimResult res;
    res.trials = config.trials;
    res.trial_seeds.resize(static_cast<std::size_t>(config.trials));
    for (int t = 0; t < config.trials; ++t)
        res.trial_seeds[t] = SplitMix64::derive(config.seed, static_cast<std::uint64_t>(t));

    std::vector<i64> errors(static_cast<std::size_t>(config.trials), 0);
    int threads = config.threads > 0 ? config.threads : default_threads();
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, config.trials));

    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                const int t = next.fetch_add(1);
                if (t >= config.trials || failed.load()) return;
                try {
                    errors[static_cast<std::size_t>(t)] = run_one_trial(config, res.trial_seeds[t]);
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    error_message = e.what();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load()) throw numeric_error("run_ser trial failed: " + error_message);

    res.m0_effective = effective_m0(config);
    res.flows = static_cast<i64>(config.trials) * res.m0_effective;
    res.trial_ser.resize(static_cast<std::size_t>(config.trials));
    for (int t = 0; t < config.trials; ++t) {
        res.errors += errors[t];
        res.trial_ser[t] = static_cast<double>(errors[t]) / static_cast<double>(res.m0_effective);
    }
    res.ser = static_cast<double>(res.errors) / static_cast<double>(res.flows);
    std::tie(res.wilson_lo, res.wilson_hi) = wilson_interval(res.errors, res.flows);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::vector<SweepRow> ser_sweep(const SimConfig& config, const std::vector<double>& beta_grid) {
    std::vector<SweepRow> rows;
    rows.reserve(beta_grid.size());
    for (double beta : beta_grid) {
        SimConfig cfg = config;
        cfg.beta = beta;
        const SimResult r = run_ser(cfg);
        rows.push_back({beta, r.ser, r.wilson_lo, r.wilson_hi, r.trials});
    }
    return rows;
}

}  // namespace braidlab
