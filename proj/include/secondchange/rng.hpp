#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace secondchange {

/// Stream tags mixed into derived seeds so that independent consumers of one
/// master seed never share a substream.
enum class Stream : std::uint64_t {
    innovations_forward = 1,
    innovations_backward = 2,
    bootstrap = 3,
    simulation_run = 4,
    simulation_bootstrap = 5,
};

/// SplitMix64 finaliser.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

/// Deterministic substream seed for (master, stream, index). Used for
/// per-replicate and per-run seeding so results do not depend on the order in
/// which replicates are evaluated.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, Stream stream,
                                        std::uint64_t index = 0) noexcept;

/// Standard normal draws from a 64-bit Mersenne twister seeded with `seed`.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double next() { return dist_(engine_); }
    void fill(std::span<double> out);
    [[nodiscard]] std::vector<double> take(std::size_t count);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace secondchange
