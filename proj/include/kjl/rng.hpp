#pragma once

#include <array>
#include <cstdint>

#include "kjl/linalg.hpp"

namespace kjl {

/// Deterministic, splittable random stream. The same (seed, stream) pair
/// yields the same draw sequence on every platform and thread schedule;
/// distinct stream ids give statistically independent substreams, which is
/// what lets benchmark repetitions run in any order.
///
/// Engine: xoshiro256++ seeded through a splitmix64 chain keyed by
/// (seed, stream). Normals come from explicit Box-Muller, not
/// std::normal_distribution, because the latter is implementation-defined.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);

    /// Fresh independent stream sharing this generator's seed.
    SeededRng derive(std::uint64_t substream) const { return SeededRng(seed_, substream); }

    /// Mixes the current stream id with a sub-id, for nested fan-out
    /// (e.g. per-repetition then per-method).
    SeededRng derive2(std::uint64_t a, std::uint64_t b) const;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 random bits.
    double next_uniform();

    /// Uniform integer on [0, bound) without modulo bias.
    std::uint64_t next_below(std::uint64_t bound);

    /// Standard normal draw (Box-Muller; second value cached).
    double next_gaussian();

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// rows x cols matrix of i.i.d. standard normal draws from the given stream.
Matrix gaussian_matrix(SeededRng& rng, std::size_t rows, std::size_t cols);

}  // namespace kjl
