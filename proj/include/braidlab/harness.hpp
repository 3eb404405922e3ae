#ifndef BRAIDLAB_HARNESS_HPP
#define BRAIDLAB_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "braidlab/dist.hpp"
#include "braidlab/graph.hpp"

namespace braidlab {

enum class DecoderKind { Bp, Peel, Maxwell };

/// Monte Carlo experiment description. beta selects gamma; for coupled runs
/// (N > 1 or w > 1) beta is the design-rate value, so memory is matched with
/// uncoupled runs at the same beta.
struct SimConfig {
    DecoderKind decoder = DecoderKind::Bp;
    int k = 3;
    double beta = 0.5;
    i64 m0 = 1000;
    std::optional<int> N;  // coupled when both set
    std::optional<int> w;
    FlowSizeDist dist = FlowSizeDist::power_law(1.5);
    int trials = 100;
    int l_max = 200;
    std::uint64_t seed = 1;
    int threads = 0;       // 0 = hardware concurrency
    i64 maxwell_m0_cap = 400;

    bool coupled() const { return N.has_value() && *N > 1; }
    void validate() const;
};

struct SimResult {
    double ser = 0.0;       // error = unconverged or converged-to-wrong
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
    i64 errors = 0;
    i64 flows = 0;
    i64 m0_effective = 0;   // differs from m0 only when kappa had to be bumped
    int trials = 0;
    double seconds = 0.0;
    std::vector<std::uint64_t> trial_seeds;
    std::vector<double> trial_ser;
};

/// Runs trials concurrently with per-trial substreams derived from the master
/// seed, aggregating in trial order so the thread count never changes the
/// result.
SimResult run_ser(const SimConfig& config);

struct SweepRow {
    double beta = 0.0;
    double ser = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    int trials = 0;
};

std::vector<SweepRow> ser_sweep(const SimConfig& config, const std::vector<double>& beta_grid);

/// 95% Wilson score interval.
std::pair<double, double> wilson_interval(i64 errors, i64 total);

/// Thread-count default: the BRAIDLAB_THREADS environment variable, else 0.
int default_threads();

}  // namespace braidlab

#endif
