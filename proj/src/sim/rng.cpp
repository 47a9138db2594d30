#include "aeolus/sim/rng.hpp"

#include <cmath>
#include <numbers>

namespace aeolus::sim {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

StreamRng::StreamRng(std::uint64_t seed, std::string_view stream_name)
    : eng_(splitmix64(seed ^ fnv1a64(stream_name))) {}

double StreamRng::uniform(double lo, double hi) {
    // 53-bit mantissa fill; avoids distribution differences between libraries.
    const std::uint64_t r = eng_() >> 11;
    const double u = static_cast<double>(r) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

double StreamRng::gauss() {
    // Box-Muller, cosine branch only: two uniforms per sample, no cached state.
    double u1 = uniform(0.0, 1.0);
    const double u2 = uniform(0.0, 1.0);
    if (u1 <= 0.0)
        u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace aeolus::sim
