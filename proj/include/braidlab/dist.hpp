#ifndef BRAIDLAB_DIST_HPP
#define BRAIDLAB_DIST_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "braidlab/graph.hpp"

namespace braidlab {

/// Flow-size law. Either the integer power law Pr(size > eta) = eta^-alpha
/// (support {2, 3, ...}, f_min = 2, epsilon = 2^-alpha) or an explicit pmf.
/// epsilon is always Pr(size > f_min).
class FlowSizeDist {
  public:
    static FlowSizeDist power_law(double alpha);
    static FlowSizeDist explicit_pmf(const std::map<i64, double>& pmf);

    bool is_power_law() const { return power_law_; }
    double alpha() const { return alpha_; }
    i64 f_min() const { return f_min_; }
    double epsilon() const { return epsilon_; }
    const std::vector<std::pair<i64, double>>& pmf() const { return pmf_; }

    i64 sample(class SplitMix64& rng) const;

    /// Exact tail probability Pr(size > eta).
    double tail(i64 eta) const;

  private:
    FlowSizeDist() = default;
    bool power_law_ = false;
    double alpha_ = 0.0;
    i64 f_min_ = 0;
    double epsilon_ = 0.0;
    std::vector<std::pair<i64, double>> pmf_;  // sorted by value; empty for power law
    std::vector<double> cdf_;
};

std::vector<i64> sample_flow_sizes(const FlowSizeDist& dist, i64 m0, std::uint64_t seed);

inline double epsilon_of(const FlowSizeDist& dist) { return dist.epsilon(); }

}  // namespace braidlab

#endif
