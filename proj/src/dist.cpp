#include "braidlab/dist.hpp"

#include <cmath>

#include "braidlab/errors.hpp"
#include "braidlab/rng.hpp"

namespace braidlab {

FlowSizeDist FlowSizeDist::power_law(double alpha) {
    if (!(alpha > 0.0)) throw param_error("power-law exponent alpha must be positive");
    FlowSizeDist d;
    d.power_law_ = true;
    d.alpha_ = alpha;
    d.f_min_ = 2;
    d.epsilon_ = std::pow(2.0, -alpha);
    return d;
}

FlowSizeDist FlowSizeDist::explicit_pmf(const std::map<i64, double>& pmf) {
    if (pmf.empty()) throw param_error("explicit pmf must be nonempty");
    double total = 0.0;
    for (const auto& [v, p] : pmf) {
        if (v < 0) throw param_error("flow sizes must be nonnegative");
        if (p < 0.0) throw param_error("pmf probabilities must be nonnegative");
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw param_error("pmf must sum to 1 within 1e-12");
    FlowSizeDist d;
    d.f_min_ = pmf.begin()->first;
    double acc = 0.0;
    for (const auto& [v, p] : pmf) {
        d.pmf_.emplace_back(v, p);
        acc += p;
        d.cdf_.push_back(acc);
    }
    d.cdf_.back() = 1.0;
    d.epsilon_ = 1.0 - pmf.at(d.f_min_);
    if (d.epsilon_ < 0.0) d.epsilon_ = 0.0;
    return d;
}

double FlowSizeDist::tail(i64 eta) const {
    if (power_law_) {
        if (eta < 1) return 1.0;
        return std::pow(static_cast<double>(eta), -alpha_);
    }
    double t = 0.0;
    for (const auto& [v, p] : pmf_)
        if (v > eta) t += p;
    return t;
}

i64 FlowSizeDist::sample(SplitMix64& rng) const {
    if (power_law_) {
        // inverse CDF on the integer tail: Pr(size > eta) = eta^-alpha
        const double u = rng.u01();
        const double x = std::pow(u, -1.0 / alpha_);
        if (x >= 9.0e18) return static_cast<i64>(9.0e18);
        const i64 v = static_cast<i64>(std::ceil(x));
        return v < 2 ? 2 : v;
    }
    const double u = rng.u01();
    std::size_t lo = 0, hi = cdf_.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (cdf_[mid] < u)
            lo = mid + 1;
        else
            hi = mid;
    }
    return pmf_[lo].first;
}

std::vector<i64> sample_flow_sizes(const FlowSizeDist& dist, i64 m0, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<i64> sizes(static_cast<std::size_t>(m0));
    for (auto& s : sizes) s = dist.sample(rng);
    return sizes;
}

}  // namespace braidlab
