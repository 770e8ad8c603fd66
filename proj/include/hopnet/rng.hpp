#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace hopnet {

/// Seed of a reproducible random stream. Identical (seed, stream) pairs give
/// identical output on every platform.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    RngSeed with_stream(std::uint64_t s) const { return {seed, s}; }
    friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

/// Philox4x32-10 counter-based generator. The 64-bit seed is the key, the
/// stream occupies the upper half of the 128-bit counter, and the lower half
/// counts blocks. Satisfies UniformRandomBitGenerator with 64-bit output.
class Philox {
public:
    using result_type = std::uint64_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit Philox(RngSeed s);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform double in (0, 1).
    double uniform_open();
    /// Exponential variate with the given rate.
    double exponential(double rate);

    /// Raw 10-round bijection, exposed for known-answer tests.
    static Block bijection(Block counter, Key key);

private:
    void refill();

    Key key_{};
    Block counter_{};
    Block buffer_{};
    int next_ = 4;
};

}  // namespace hopnet
