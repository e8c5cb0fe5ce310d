#pragma once

#include <cstdint>
#include <random>

#include <gmpxx.h>

namespace twistlaw {

using Rng = std::mt19937_64;

// Seed splitting: every stochastic task k of a run seeded with `seed` draws from
// Rng(split_seed(seed, stream, k)). Streams separate unrelated consumers (rays,
// oracle batches, bootstrap) so adding one never perturbs another.
enum class Stream : std::uint64_t {
    cf_samples = 1,
    rays = 2,
    oracle_transform = 3,
    oracle_thin = 4,
    bootstrap = 5,
    calibration = 6,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t split_seed(std::uint64_t seed, Stream stream, std::uint64_t task) noexcept;
Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t task);

// Uniform integer in [0, 2^bits).
mpz_class uniform_bits(Rng& rng, unsigned bits);

double uniform01(Rng& rng);

} // namespace twistlaw
