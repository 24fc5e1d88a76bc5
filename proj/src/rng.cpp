#include "qlv/rng.hpp"

#include <cmath>

#include "qlv/errors.hpp"

namespace qlv {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace

RngStream RngStream::derive(std::uint64_t seed, const std::string& tag,
                            std::uint64_t i0, std::uint64_t i1, std::uint64_t i2) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s) ^ fnv1a(tag);
    h = splitmix64(h) ^ (i0 * 0x9e3779b97f4a7c15ull + 1);
    h = splitmix64(h) ^ (i1 * 0xc2b2ae3d27d4eb4full + 2);
    h = splitmix64(h) ^ (i2 * 0x165667b19e3779f9ull + 3);
    splitmix64(h);
    return RngStream(h);
}

std::uint64_t RngStream::next_u64() { return splitmix64(state_); }

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::log_uniform(double lo, double hi) {
    if (!(lo > 0.0) || !(lo <= hi)) {
        throw RangeEmpty("log_uniform: empty or invalid range [" + std::to_string(lo) +
                         ", " + std::to_string(hi) + ")");
    }
    return std::exp(uniform(std::log(lo), std::log(hi)));
}

double RngStream::phase() { return uniform(0.0, 2.0 * M_PI); }

long RngStream::next_long(long lo, long hi) {
    if (lo > hi) throw RangeEmpty("next_long: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(next_u64() % span);
}

}  // namespace qlv
