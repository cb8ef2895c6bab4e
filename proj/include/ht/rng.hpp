#ifndef HT_RNG_HPP
#define HT_RNG_HPP

// Counter-based generator: output i of stream s under seed k is a pure
// function mix(base(k,s) + (i+1)*GOLDEN), the SplitMix64 finalizer over a
// Weyl sequence. Disjoint stream indices give independent shards, so Monte
// Carlo results are bit-reproducible for any worker count.

#include <cmath>
#include <cstdint>

namespace ht::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t splitmix_finalize(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

// 64-bit hash of (seed, stream); used for per-shard substreams.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = splitmix_finalize(seed + kGolden);
    x = splitmix_finalize(x ^ splitmix_finalize(stream + 0xD1B54A32D192ED03ULL));
    return x;
}

class Counter {
  public:
    explicit Counter(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(derive_stream(seed, stream)) {}

    std::uint64_t next_u64() { return splitmix_finalize(base_ + (++i_) * kGolden); }

    // uniform on [0,1)
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform on (0,1); both endpoints excluded
    double u01p() { return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52; }

    // standard normal (Box-Muller; two uniforms per draw, no cached state)
    double gaussian() {
        double u = u01p();
        double v = u01();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
    }

    // standard exponential
    double exponential() { return -std::log(u01p()); }

  private:
    std::uint64_t base_;
    std::uint64_t i_ = 0;
};

}  // namespace ht::rng

#endif  // HT_RNG_HPP
