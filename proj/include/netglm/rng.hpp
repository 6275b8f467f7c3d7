#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace netglm {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// The 128-bit counter is split into a 64-bit stream id (high half) and a
/// 64-bit block index (low half), so distinct stream ids never overlap.
class CounterRng {
public:
    using result_type = std::uint64_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    CounterRng() = default;
    CounterRng(std::uint64_t key, std::uint64_t stream_id);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Raw block function, exposed for known-answer tests.
    static Block philox(Block counter, Key key);

private:
    void refill();

    Key key_{0, 0};
    std::uint64_t stream_ = 0;
    std::uint64_t block_ = 0;
    Block buffer_{};
    int used_ = 4;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

/// Independent stream for (master seed, replicate index, stage tag, sub-index).
CounterRng make_stream(std::uint64_t master_seed, std::uint64_t replicate,
                       std::string_view stage, std::uint64_t sub = 0);

}  // namespace netglm
