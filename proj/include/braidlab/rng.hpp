#ifndef BRAIDLAB_RNG_HPP
#define BRAIDLAB_RNG_HPP

#include <cstdint>
#include <vector>

namespace braidlab {

/// SplitMix64 (Steele/Lea/Flood). Chosen over std engines because its output
/// is fully specified, so graphs and simulations reproduce bit-for-bit across
/// platforms and standard libraries. Streams are derived by hashing the seed
/// with a stream index, which makes per-trial substreams independent of
/// scheduling order.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, n). Multiply-shift with rejection, so the
    /// distribution is exactly uniform for any n.
    std::uint64_t bounded(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t t = (0 - n) % n;
            while (lo < t) {
                m = static_cast<unsigned __int128>(next()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in the open interval (0, 1).
    double u01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    /// Derives an independent substream (e.g. one per Monte Carlo trial).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 h(seed ^ (0xA0761D6478BD642FULL + index * 0xE7037ED1A0B428DBULL));
        h.next();
        return h.next();
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::uint64_t state_;
};

}  // namespace braidlab

#endif
