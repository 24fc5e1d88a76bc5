#pragma once

#include <cstdint>
#include <string>

namespace qlv {

// Deterministic per-task random stream. Every (seed, tag, indices...)
// combination owns an independent SplitMix64 sequence, so sampling is
// reproducible bitwise regardless of execution order or thread count.
class RngStream {
public:
    explicit RngStream(std::uint64_t state) : state_(state) {}

    // Derives a stream from a run seed plus a textual tag and up to three
    // integer indices (identity id, arity, sample index, ...).
    static RngStream derive(std::uint64_t seed, const std::string& tag,
                            std::uint64_t i0 = 0, std::uint64_t i1 = 0,
                            std::uint64_t i2 = 0);

    std::uint64_t next_u64();

    // Uniform in [0, 1) with 53 random bits.
    double next_double();

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Log-uniform in [lo, hi); requires 0 < lo <= hi.
    double log_uniform(double lo, double hi);

    // Uniform angle in [0, 2*pi).
    double phase();

    // Uniform integer in [lo, hi] inclusive.
    long next_long(long lo, long hi);

private:
    std::uint64_t state_;
};

}  // namespace qlv
