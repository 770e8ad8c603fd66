#include "hopnet/rng.hpp"

#include <cmath>

namespace hopnet {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox::Philox(RngSeed s) {
    key_ = {static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32)};
    counter_ = {0u, 0u, static_cast<std::uint32_t>(s.stream),
                static_cast<std::uint32_t>(s.stream >> 32)};
}

Philox::Block Philox::bijection(Block c, Key k) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

void Philox::refill() {
    buffer_ = bijection(counter_, key_);
    if (++counter_[0] == 0) ++counter_[1];
    next_ = 0;
}

Philox::result_type Philox::operator()() {
    if (next_ >= 4) refill();
    const std::uint64_t lo = buffer_[next_];
    const std::uint64_t hi = buffer_[next_ + 1];
    next_ += 2;
    return (hi << 32) | lo;
}

double Philox::uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double Philox::uniform_open() {
    return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52;
}

double Philox::exponential(double rate) {
    return -std::log(uniform_open()) / rate;
}

}  // namespace hopnet
