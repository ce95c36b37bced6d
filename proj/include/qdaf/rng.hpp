#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qdaf {

/// Seeded generator with platform-independent draws.
///
/// std::mt19937_64 output is fixed by the standard, but the standard
/// distributions are not, so bounded integers and unit reals are derived
/// here directly from the raw engine output.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Uniform integer in [lo, hi] (inclusive).
    std::int64_t between(std::int64_t lo, std::int64_t hi);

    /// Uniform real in [0, 1) with 53 bits of resolution.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool operator==(const Rng&) const = default;

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Derive an independent stream seed from a master seed and a path of tags.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

}  // namespace qdaf
