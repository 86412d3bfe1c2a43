#pragma once

#include <cstdint>

namespace susehr {

// SplitMix64. Chosen over the platform engines because its output is fully
// specified by three published constants, so the same seed produces the
// same dataset on every platform and in every reimplementation
// (algorithm and derivation scheme documented in docs/generator.md).
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t state) : state_(state) {}

    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Generator state for record `index` under dataset seed `seed`;
    // sharding a dataset by index ranges cannot change its content. The
    // state is mixed once so that the per-record streams do not sit on the
    // same arithmetic progression (consecutive raw states would make each
    // record a one-draw shift of its neighbour).
    static SplitMix64 for_record(uint64_t seed, uint64_t index) {
        return SplitMix64(mix(seed + (index + 1) * 0x9E3779B97F4A7C15ULL));
    }

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform in [0, bound). Modulo bias is negligible for test-data
    // purposes and keeps the draw sequence trivially reproducible.
    uint64_t below(uint64_t bound) { return bound == 0 ? 0 : next() % bound; }

    // Uniform integer in [lo, hi], inclusive.
    long long between(long long lo, long long hi) {
        return lo + static_cast<long long>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    // Bernoulli with probability p expressed in parts per million.
    bool chance_ppm(uint64_t ppm) { return below(1000000) < ppm; }

private:
    uint64_t state_;
};

} // namespace susehr
