#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace aeolus::sim {

/// SplitMix64 scrambler; used to derive well-separated stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// FNV-1a hash of a stream name.
std::uint64_t fnv1a64(std::string_view s);

/// Deterministic per-sensor noise stream. Gaussian values come from a
/// hand-rolled Box-Muller transform so sequences are identical across
/// standard-library implementations.
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::string_view stream_name);

    /// Standard normal sample.
    double gauss();
    /// Gaussian with the given standard deviation.
    double gauss(double sigma) { return sigma * gauss(); }
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);

private:
    std::mt19937_64 eng_;
};

} // namespace aeolus::sim
