#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace relcon::rng {

// Seed expansion used everywhere a run seed is turned into a stream seed.
// splitmix64, Vigna's constants; fully defined by the bit pattern, so the
// same seed yields the same streams on every platform.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Stream tags: stream_seed = splitmix64(run_seed ^ tag). Keeping the tags
// here makes the seed expansion auditable from one place.
inline constexpr std::uint64_t kNoiseStreamTag = 0x6e6f6973652d3031ull; // "nois-01"
inline constexpr std::uint64_t kIcStreamTag = 0x6963732d73747230ull;    // "ics-str0"

// Deterministic random stream. std::mt19937_64 is bit-exact per the
// standard; the uniform and normal mappings below are written out so the
// output does not depend on the standard library's distribution
// implementations.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : gen_(seed) {}

    // in [0, 1), 53 random bits
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller, one deviate per call (two uniforms consumed, the sine
    // branch is discarded). 1-u keeps the log argument in (0, 1].
    double normal() {
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

private:
    static constexpr double kPi = 3.14159265358979323846;
    std::mt19937_64 gen_;
};

// Effective seed of a run's frozen noise realization. The signal's own seed
// is folded in so that two distinct noise signals under one run seed receive
// distinct streams.
inline constexpr std::uint64_t noise_seed_for_run(std::uint64_t run_seed,
                                                  std::uint64_t signal_seed) {
    return splitmix64(run_seed ^ kNoiseStreamTag) ^ signal_seed;
}

inline Stream ic_stream(std::uint64_t run_seed) {
    return Stream(splitmix64(run_seed ^ kIcStreamTag));
}

} // namespace relcon::rng
