#pragma once

#include <cstdint>
#include <random>

namespace intgarch {

/// SplitMix64 finaliser; used to derive independent seeds from one user seed.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of sub-stream `stream` of `seed`: splitmix64(seed + (stream + 1) * 0x9E3779B97F4A7C15).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/**
 * Portable random stream.
 *
 * std::mt19937_64 is bit-specified by the standard, but the std distributions
 * are not, so the variate generators below are written out: 53-bit uniforms,
 * Marsaglia polar normals and Marsaglia-Tsang gammas (exact for every k > 0).
 * Identical seeds give identical draws on every conforming platform.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    double normal() noexcept;
    /// Gamma(shape, scale 1).
    double gamma(double shape) noexcept;

    std::uint64_t next_u64() noexcept { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Sub-stream ids used by the simulator.
enum class Stream : std::uint64_t {
    Epsilon = 0,
    Eta = 1,
    Auxiliary = 2,
};

[[nodiscard]] inline Rng make_stream(std::uint64_t seed, Stream stream) {
    return Rng(derive_seed(seed, static_cast<std::uint64_t>(stream)));
}

}  // namespace intgarch
